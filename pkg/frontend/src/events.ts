/** Server-sent event parsing and in-order delivery.
 *
 * The stream replays the session's whole log from seq 0, then goes live.
 * Events must be applied in seq order; a gap means we missed something and
 * the owner should refetch a full snapshot and resubscribe.
 */

import type { EngineEvent } from "./types.js";

export function parseSseChunk(buffer: string, chunk: string): {
  events: EngineEvent[];
  rest: string;
} {
  const text = buffer + chunk;
  const events: EngineEvent[] = [];
  const parts = text.split("\n\n");
  const rest = parts.pop() ?? "";
  for (const part of parts) {
    for (const line of part.split("\n")) {
      if (line.startsWith("data: ")) {
        events.push(JSON.parse(line.slice("data: ".length)));
      }
    }
  }
  return { events, rest };
}

export class EventTracker {
  nextSeq = 0;

  /** Returns "apply" | "duplicate" | "gap". Duplicates happen on resubscribe. */
  classify(event: EngineEvent): "apply" | "duplicate" | "gap" {
    if (event.seq === this.nextSeq) {
      this.nextSeq += 1;
      return "apply";
    }
    if (event.seq < this.nextSeq) {
      return "duplicate";
    }
    return "gap";
  }

  reset(): void {
    this.nextSeq = 0;
  }
}
