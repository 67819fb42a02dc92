/**
 * Comment-matrix shading: cell counts map to a five-step grey ramp by
 * count quantile among the occupied cells, darker meaning more overlap.
 * Empty cells stay unshaded (null).
 */

export const GREY_RAMP = ["#d9d9d9", "#bdbdbd", "#8c8c8c", "#4d4d4d", "#000000"] as const;

export function shadeSteps(cells: number[][]): Array<Array<number | null>> {
  const occupied = Array.from(new Set(cells.flat().filter((count) => count > 0))).sort(
    (a, b) => a - b,
  );
  const step = (count: number): number | null => {
    if (count <= 0) return null;
    if (occupied.length === 1) return GREY_RAMP.length - 1;
    const rank = occupied.indexOf(count);
    return Math.round(((GREY_RAMP.length - 1) * rank) / (occupied.length - 1));
  };
  return cells.map((row) => row.map(step));
}

export function shadeColors(cells: number[][]): Array<Array<string | null>> {
  return shadeSteps(cells).map((row) =>
    row.map((step) => (step === null ? null : GREY_RAMP[step] ?? null)),
  );
}
