/** Split a text into plain/highlighted segments from match block offsets. */

export interface Segment {
  text: string;
  highlighted: boolean;
}

export type Side = "a" | "b";

/**
 * Character ranges for one side of the pair, from [aStart, bStart, length]
 * blocks. Returns null if any range falls outside the text (the caller
 * renders without highlights and shows a warning instead of crashing).
 */
export function rangesFor(
  blocks: [number, number, number][],
  side: Side,
  textLength: number,
): [number, number][] | null {
  const ranges: [number, number][] = [];
  for (const [aStart, bStart, length] of blocks) {
    const start = side === "a" ? aStart : bStart;
    if (!Number.isInteger(start) || !Number.isInteger(length)) return null;
    if (start < 0 || length < 1 || start + length > textLength) return null;
    ranges.push([start, start + length]);
  }
  ranges.sort((x, y) => x[0] - y[0]);
  for (let i = 1; i < ranges.length; i++) {
    if (ranges[i][0] < ranges[i - 1][1]) return null; // overlapping blocks
  }
  return ranges;
}

export function segmentsFor(text: string, ranges: [number, number][]): Segment[] {
  const segments: Segment[] = [];
  let cursor = 0;
  for (const [start, end] of ranges) {
    if (start > cursor) segments.push({ text: text.slice(cursor, start), highlighted: false });
    segments.push({ text: text.slice(start, end), highlighted: true });
    cursor = end;
  }
  if (cursor < text.length) segments.push({ text: text.slice(cursor), highlighted: false });
  return segments;
}
