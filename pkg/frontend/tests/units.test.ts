import { describe, expect, it } from "vitest";

import { amountFromDrag, barAt, layoutBars } from "../src/barchart.js";
import { GREY_RAMP, shadeColors, shadeSteps } from "../src/comments.js";
import { EMPTY_METER, meterFromUpdate } from "../src/meter.js";
import { ProtocolError, decodeLine, encodeLine } from "../src/protocol.js";

const CATEGORIES = [
  { id: "Defense", name: "Defense", kind: "expense" as const, description: "guns" },
  { id: "IncomeTax", name: "IncomeTax", kind: "revenue" as const, description: "taxes" },
];

describe("meter rendering", () => {
  it("formats percentages below the clamp", () => {
    expect(meterFromUpdate({ raw: "0.050000", display: "0.050000" })).toEqual({
      label: "5.0%",
      fill: 0.5,
      clamped: false,
    });
    expect(meterFromUpdate({ raw: "0.000000", display: "0.000000" })).toEqual(EMPTY_METER);
    expect(meterFromUpdate({ raw: "0.100000", display: "0.100000" })).toEqual({
      label: "10.0%",
      fill: 1,
      clamped: false,
    });
  });

  it("clamps above ten percent with the exact token", () => {
    const view = meterFromUpdate({ raw: "0.200000", display: ">10%" });
    expect(view.label).toBe(">10%");
    expect(view.fill).toBe(1);
    expect(view.clamped).toBe(true);
  });
});

describe("bar chart geometry", () => {
  const amounts = { Defense: -700, IncomeTax: 1300 };
  const layout = layoutBars(CATEGORIES, amounts, { width: 640, height: 320 });

  it("groups revenue above the axis and expenses below", () => {
    const defense = layout.bars.find((b) => b.category === "Defense")!;
    const tax = layout.bars.find((b) => b.category === "IncomeTax")!;
    expect(defense.y).toBe(layout.axisY);
    expect(tax.y + tax.height).toBeCloseTo(layout.axisY);
  });

  it("maps drags back to integer dollars", () => {
    const defense = layout.bars.find((b) => b.category === "Defense")!;
    const pixelsFor100 = 100 / layout.dollarsPerPixel;
    expect(amountFromDrag(defense, pixelsFor100, layout)).toBe(-800);
    expect(amountFromDrag(defense, -pixelsFor100, layout)).toBe(-600);
    expect(amountFromDrag(defense, 0, layout)).toBe(-700);
  });

  it("hit-testing finds bars and misses gaps", () => {
    const defense = layout.bars.find((b) => b.category === "Defense")!;
    expect(barAt(layout, defense.x + 1, defense.y + 1)?.category).toBe("Defense");
    expect(barAt(layout, 0, 0)).toBeNull();
  });

  it("handles an empty chart", () => {
    const empty = layoutBars([], {}, {});
    expect(empty.bars).toHaveLength(0);
  });
});

describe("comment matrix shading", () => {
  it("maps count quantiles onto the five-step ramp, empty cells unshaded", () => {
    const steps = shadeSteps([
      [0, 1],
      [3, 9],
    ]);
    expect(steps[0]![0]).toBeNull();
    expect(steps[0]![1]).toBe(0);
    expect(steps[1]![0]).toBe(2);
    expect(steps[1]![1]).toBe(4);
  });

  it("darker always means more overlap", () => {
    const flat = [[2, 5, 5, 11, 2, 7]];
    const steps = shadeSteps(flat)[0]!;
    const counts = flat[0]!;
    for (let i = 0; i < counts.length; i += 1) {
      for (let j = 0; j < counts.length; j += 1) {
        if (counts[i]! < counts[j]!) {
          expect(steps[i]!).toBeLessThanOrEqual(steps[j]!);
        }
      }
    }
  });

  it("a single occupied shade is black, colors come from the ramp", () => {
    expect(shadeSteps([[4, 4]])).toEqual([[4, 4]]);
    expect(shadeColors([[0, 1]])[0]).toEqual([null, GREY_RAMP[4]]);
    expect(shadeColors([[1, 9]])[0]).toEqual([GREY_RAMP[0], GREY_RAMP[4]]);
  });
});

describe("protocol codec", () => {
  it("round-trips and stays on one line", () => {
    const message = {
      kind: "Adjust" as const,
      session_id: "s1",
      sender: "alice",
      seq: null,
      payload: { category: "Defense", amount: -600 },
    };
    const line = encodeLine(message);
    expect(line.includes("\n")).toBe(false);
    expect(decodeLine(line)).toEqual(message);
  });

  it("rejects malformed lines and payloads", () => {
    expect(() => decodeLine("nope")).toThrow(ProtocolError);
    expect(() => decodeLine('{"kind":"Adjust"}')).toThrow(ProtocolError);
    expect(() =>
      encodeLine({
        kind: "Adjust",
        session_id: "s1",
        sender: "alice",
        seq: null,
        payload: { category: "Defense" }, // missing amount
      }),
    ).toThrow();
    expect(() =>
      encodeLine({
        kind: "Adjust",
        session_id: "s1",
        sender: "alice",
        seq: null,
        payload: { category: "Defense", amount: 1.5 }, // non-integer
      }),
    ).toThrow();
  });
});
