/** Outbound pointer throttle: at most `maxHz` sends per second, always
 * flushing the most recent value so the final pointer position is never
 * lost. Clock injectable for tests. */

export class RateLimiter<T> {
  private readonly interval: number;
  private lastSent = -Infinity;
  private pending: T | undefined;
  private timer: ReturnType<typeof setTimeout> | null = null;
  sent = 0;

  constructor(
    maxHz: number,
    private readonly send: (value: T) => void,
    private readonly now: () => number = () => performance.now(),
    private readonly schedule: (fn: () => void, ms: number) => void =
      (fn, ms) => { this.timer = setTimeout(fn, ms); },
  ) {
    this.interval = 1000 / maxHz;
  }

  offer(value: T): void {
    const t = this.now();
    if (t - this.lastSent >= this.interval) {
      this.lastSent = t;
      this.sent++;
      this.send(value);
      return;
    }
    const hadPending = this.pending !== undefined;
    this.pending = value;
    if (!hadPending) {
      const wait = this.interval - (t - this.lastSent);
      this.schedule(() => this.flush(), wait);
    }
  }

  flush(): void {
    if (this.pending === undefined) return;
    const value = this.pending;
    this.pending = undefined;
    this.lastSent = this.now();
    this.sent++;
    this.send(value);
  }

  dispose(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.pending = undefined;
  }
}
