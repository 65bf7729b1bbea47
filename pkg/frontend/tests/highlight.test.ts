import { describe, expect, it } from "vitest";
import { rangesFor, segmentsFor } from "../src/highlight.js";

describe("rangesFor", () => {
  it("maps blocks to side-a offsets", () => {
    const blocks: [number, number, number][] = [
      [10, 2, 5],
      [0, 20, 4],
    ];
    expect(rangesFor(blocks, "a", 30)).toEqual([
      [0, 4],
      [10, 15],
    ]);
  });

  it("maps blocks to side-b offsets", () => {
    const blocks: [number, number, number][] = [[10, 2, 5]];
    expect(rangesFor(blocks, "b", 30)).toEqual([[2, 7]]);
  });

  it("rejects out-of-bounds ranges", () => {
    expect(rangesFor([[28, 0, 5]], "a", 30)).toBeNull();
    expect(rangesFor([[-1, 0, 5]], "a", 30)).toBeNull();
    expect(rangesFor([[0, 0, 0]], "a", 30)).toBeNull();
  });

  it("rejects overlapping ranges", () => {
    expect(
      rangesFor(
        [
          [0, 0, 5],
          [3, 10, 5],
        ],
        "a",
        30,
      ),
    ).toBeNull();
  });

  it("handles an empty block list", () => {
    expect(rangesFor([], "a", 10)).toEqual([]);
  });
});

describe("segmentsFor", () => {
  it("splits text around highlighted ranges", () => {
    const segments = segmentsFor("abcdefghij", [
      [2, 4],
      [6, 9],
    ]);
    expect(segments).toEqual([
      { text: "ab", highlighted: false },
      { text: "cd", highlighted: true },
      { text: "ef", highlighted: false },
      { text: "ghi", highlighted: true },
      { text: "j", highlighted: false },
    ]);
    expect(segments.map((s) => s.text).join("")).toBe("abcdefghij");
  });

  it("covers the full text when a range spans it", () => {
    expect(segmentsFor("abc", [[0, 3]])).toEqual([{ text: "abc", highlighted: true }]);
  });
});
