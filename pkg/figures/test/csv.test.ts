import { describe, expect, it } from "vitest";

import {
  MissingColumnError,
  MissingDataError,
  distinct,
  numbers,
  parseTable,
  requireColumns,
} from "../src/csv";

describe("parseTable", () => {
  it("reads headers and rows", () => {
    const t = parseTable("a,b\n1,2\n3,4\n");
    expect(t.columns).toEqual(["a", "b"]);
    expect(t.rows).toEqual([
      { a: "1", b: "2" },
      { a: "3", b: "4" },
    ]);
  });

  it("rejects an empty file", () => {
    expect(() => parseTable("", "x.csv")).toThrow(MissingDataError);
    expect(() => parseTable("", "x.csv")).toThrow(/x\.csv/);
  });

  it("rejects a header-only file", () => {
    expect(() => parseTable("a,b\n", "h.csv")).toThrow(MissingDataError);
  });
});

describe("requireColumns", () => {
  const table = parseTable("t,f_c\n0,0.5\n");

  it("passes when all columns exist", () => {
    expect(() => requireColumns(table, ["t", "f_c"], "ok.csv")).not.toThrow();
  });

  it("names the missing column", () => {
    try {
      requireColumns(table, ["t", "n_G0"], "bad.csv");
      expect.unreachable();
    } catch (e) {
      expect(e).toBeInstanceOf(MissingColumnError);
      expect((e as MissingColumnError).column).toBe("n_G0");
      expect((e as Error).message).toContain('"n_G0"');
      expect((e as Error).message).toContain("bad.csv");
    }
  });
});

describe("numbers", () => {
  it("parses a numeric column", () => {
    const t = parseTable("x\n1.5\n-2\n");
    expect(numbers(t, "x")).toEqual([1.5, -2]);
  });

  it("flags junk values", () => {
    const t = parseTable("x\nok\n");
    expect(() => numbers(t, "x")).toThrow(/non-numeric/);
  });
});

describe("distinct", () => {
  it("keeps first-seen order", () => {
    const t = parseTable("g\nb\na\nb\n");
    expect(distinct(t, "g")).toEqual(["b", "a"]);
  });
});
