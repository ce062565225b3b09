/** 1-second polling loop with an in-flight guard; stops on terminal phases. */

import { ApiClient } from "./api.js";
import type { SessionDoc } from "./types.js";

export const POLL_INTERVAL_MS = 1000;

export class SessionPoller {
  private timer: ReturnType<typeof setInterval> | null = null;
  private inFlight = false;

  constructor(
    private readonly api: ApiClient,
    private readonly sessionId: string,
    private readonly onUpdate: (doc: SessionDoc) => void,
    private readonly onError: (error: unknown) => void,
  ) {}

  start(): void {
    void this.tick();
    this.timer = setInterval(() => void this.tick(), POLL_INTERVAL_MS);
  }

  stop(): void {
    if (this.timer !== null) clearInterval(this.timer);
    this.timer = null;
  }

  private async tick(): Promise<void> {
    if (this.inFlight) return;
    this.inFlight = true;
    try {
      const doc = await this.api.getSession(this.sessionId);
      this.onUpdate(doc);
      if (doc.phase === "completed" || doc.phase === "stalemate") this.stop();
    } catch (error) {
      this.onError(error);
    } finally {
      this.inFlight = false;
    }
  }
}
