/** Web Audio playback of the binary PCM frames (16-bit LE, stereo,
 * 48 kHz) with a 150 ms jitter buffer. */

import { JitterBuffer } from "./jitterBuffer.js";

const SAMPLE_RATE = 48000;
const CHANNELS = 2;

export class AudioPlayer {
  private ctx: AudioContext | null = null;
  private buffer: JitterBuffer<AudioBuffer> | null = null;

  /** Must be called from a user gesture (browser autoplay policy). */
  enable(): void {
    if (this.ctx) return;
    this.ctx = new AudioContext({ sampleRate: SAMPLE_RATE });
    this.buffer = new JitterBuffer<AudioBuffer>(
      150, () => this.ctx!.currentTime,
    );
  }

  get enabled(): boolean {
    return this.ctx !== null;
  }

  get underruns(): number {
    return this.buffer?.underruns ?? 0;
  }

  feed(frame: ArrayBuffer): void {
    if (!this.ctx || !this.buffer) return;
    const ints = new Int16Array(frame);
    const frames = ints.length / CHANNELS;
    if (frames === 0) return;
    const audio = this.ctx.createBuffer(CHANNELS, frames, SAMPLE_RATE);
    for (let ch = 0; ch < CHANNELS; ch++) {
      const data = audio.getChannelData(ch);
      for (let i = 0; i < frames; i++) {
        data[i] = ints[i * CHANNELS + ch] / 32768;
      }
    }
    this.buffer.push(audio, frames / SAMPLE_RATE);
    for (const { payload, startTime } of this.buffer.drain()) {
      const source = this.ctx.createBufferSource();
      source.buffer = payload;
      source.connect(this.ctx.destination);
      source.start(startTime);
    }
  }
}
