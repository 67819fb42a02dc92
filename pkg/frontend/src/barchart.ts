/**
 * Bar chart geometry and drag arithmetic, kept free of the DOM so the
 * interaction logic is testable. Revenue bars rise above the axis,
 * expense bars hang below it; dragging a bar converts pixel movement into
 * a new absolute dollar target clamped to the category's sign convention.
 */

import type { Amounts, CategoryInfo } from "./protocol.js";

export interface Bar {
  category: string;
  kind: "revenue" | "expense";
  amount: number;
  description: string;
  x: number;
  width: number;
  /** Top edge in chart pixels (y grows downward). */
  y: number;
  height: number;
}

export interface ChartLayout {
  bars: Bar[];
  axisY: number;
  width: number;
  height: number;
  /** Dollars (millions) per vertical pixel. */
  dollarsPerPixel: number;
}

export interface LayoutOptions {
  width?: number;
  height?: number;
  gap?: number;
}

export function layoutBars(
  categories: CategoryInfo[],
  amounts: Amounts,
  options: LayoutOptions = {},
): ChartLayout {
  const width = options.width ?? 640;
  const height = options.height ?? 320;
  const gap = options.gap ?? 8;
  const axisY = height / 2;
  const maxMagnitude = Math.max(
    1,
    ...categories.map((c) => Math.abs(amounts[c.id] ?? 0)),
  );
  const scale = (height / 2 - 10) / maxMagnitude; // pixels per dollar
  const barWidth = categories.length
    ? Math.max(4, (width - gap * (categories.length + 1)) / categories.length)
    : 0;

  const bars = categories.map((category, index) => {
    const amount = amounts[category.id] ?? 0;
    const pixels = Math.abs(amount) * scale;
    return {
      category: category.id,
      kind: category.kind,
      amount,
      description: category.description,
      x: gap + index * (barWidth + gap),
      width: barWidth,
      y: amount >= 0 ? axisY - pixels : axisY,
      height: pixels,
    };
  });
  return { bars, axisY, width, height, dollarsPerPixel: 1 / scale };
}

/**
 * New target amount after dragging a bar's free end by deltaY pixels
 * (positive = downward, as in screen coordinates). A revenue bar's top
 * edge dragged up grows the amount; an expense bar's bottom edge dragged
 * down grows its magnitude. Both reduce to the same signed-delta formula.
 * The result is an integer clamped so the sign convention always holds.
 */
export function amountFromDrag(bar: Bar, deltaY: number, layout: ChartLayout): number {
  const moved = Math.round(bar.amount - deltaY * layout.dollarsPerPixel);
  if (bar.kind === "revenue") {
    return Math.max(0, moved);
  }
  return Math.min(0, moved);
}

export function barAt(layout: ChartLayout, x: number, y: number): Bar | null {
  for (const bar of layout.bars) {
    if (x >= bar.x && x <= bar.x + bar.width && y >= bar.y && y <= bar.y + bar.height) {
      return bar;
    }
  }
  return null;
}
