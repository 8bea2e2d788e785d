/** Scheduling logic for streamed PCM playback.
 *
 * Incoming chunks are timestamped onto a running schedule; playback
 * starts only once `targetMs` of audio is queued, and an underrun
 * (schedule falling behind the clock) re-primes rather than glitching
 * forward chunk by chunk. Pure logic: the clock is injected, Web Audio
 * lives in audioPlayer.ts. All times in seconds except the target.
 */

export interface ScheduledChunk<T> {
  payload: T;
  /** Absolute start time in seconds on the injected clock. */
  startTime: number;
}

export class JitterBuffer<T> {
  private queue: { payload: T; duration: number }[] = [];
  private queuedSeconds = 0;
  private nextStart = 0;
  private started = false;
  underruns = 0;

  constructor(
    private readonly targetMs: number,
    private readonly now: () => number,
  ) {}

  push(payload: T, durationSeconds: number): void {
    this.queue.push({ payload, duration: durationSeconds });
    this.queuedSeconds += durationSeconds;
  }

  /** Chunks that should be handed to the audio output now, each with its
   * scheduled start time. Empty while priming. */
  drain(): ScheduledChunk<T>[] {
    const t = this.now();
    const target = this.targetMs / 1000;
    if (this.started && this.nextStart < t && this.queue.length === 0) {
      // schedule ran dry: count it and re-prime on the next push
      this.underruns++;
      this.started = false;
    }
    if (!this.started) {
      if (this.queuedSeconds < target) return [];
      this.started = true;
      this.nextStart = t + target;
    }
    const out: ScheduledChunk<T>[] = [];
    while (this.queue.length > 0) {
      const { payload, duration } = this.queue.shift()!;
      this.queuedSeconds -= duration;
      if (this.nextStart < t) {
        // fell behind while draining: restart cleanly from here
        this.underruns++;
        this.nextStart = t + target;
      }
      out.push({ payload, startTime: this.nextStart });
      this.nextStart += duration;
    }
    return out;
  }

  get bufferedSeconds(): number {
    return this.queuedSeconds;
  }

  get isRunning(): boolean {
    return this.started;
  }
}
