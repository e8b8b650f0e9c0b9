/** The phrase input: submit text, surface parse hints, offer a palette of
 * every phrase template the session's grammar currently accepts. */

export interface PaletteEntry {
  text: string;
  isTemplate: boolean;
}

export function paletteEntries(
  phrases: string[],
  componentTypes: string[],
  query: string,
): PaletteEntry[] {
  const q = query.trim().toLowerCase();
  const fromTypes = componentTypes.map((t) => ({
    text: `add component ${t.toLowerCase()}`,
    isTemplate: false,
  }));
  const fromPhrases = phrases.map((p) => ({ text: p, isTemplate: true }));
  const all = [...fromPhrases, ...fromTypes];
  if (!q) {
    return all;
  }
  return all.filter((entry) => entry.text.toLowerCase().includes(q));
}

export interface BarNotice {
  kind: "ok" | "rejected";
  text: string;
}

export function noticeFor(outcome: {
  ok: boolean;
  created?: number;
  error?: { code: string; message: string; hint?: string };
}): BarNotice {
  if (outcome.ok) {
    return {
      kind: "ok",
      text: outcome.created !== undefined ? `node ${outcome.created} added` : "applied",
    };
  }
  const error = outcome.error;
  if (!error) {
    return { kind: "rejected", text: "rejected" };
  }
  const hint = error.hint ? ` — try: ${error.hint}` : "";
  return { kind: "rejected", text: `${error.code}: ${error.message}${hint}` };
}
