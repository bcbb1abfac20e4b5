// One sequential light-to-dark ramp shared by pie sectors (indexed by time
// bin) and arcs (indexed by mean transition time), so "later" always reads
// as "darker" in both encodings.

const RAMP_HUE = 215;
const RAMP_SAT = 62;
const LIGHT_END = 88; // t = 0
const DARK_END = 20; // t = 1

export function clamp01(t: number): number {
  return t < 0 ? 0 : t > 1 ? 1 : t;
}

/** Lightness (percent) of the shared ramp; strictly decreasing in t. */
export function rampLightness(t: number): number {
  return LIGHT_END - (LIGHT_END - DARK_END) * clamp01(t);
}

export function rampColor(t: number): string {
  return `hsl(${RAMP_HUE}, ${RAMP_SAT}%, ${rampLightness(t)}%)`;
}

/** Ramp position for a time bin: bin midpoints spread over [0, 1]. */
export function binPosition(bin: number, totalBins: number): number {
  if (totalBins <= 1) return 0.5;
  return (bin + 0.5) / totalBins;
}

/** Heat overlay RGBA: a fixed warm color whose opacity tracks intensity. */
export function heatPixel(value: number, peak: number): [number, number, number, number] {
  const t = peak > 0 ? clamp01(value / peak) : 0;
  return [214, 69, 35, Math.round(230 * t)];
}

/** Expand a row-major grid into RGBA pixel data for a canvas overlay. */
export function heatGridToRgba(
  cells: number[],
  width: number,
  height: number,
): Uint8ClampedArray<ArrayBuffer> {
  let peak = 0;
  for (const v of cells) {
    if (v > peak) peak = v;
  }
  const out = new Uint8ClampedArray(width * height * 4);
  for (let i = 0; i < cells.length; i++) {
    const [r, g, b, a] = heatPixel(cells[i] ?? 0, peak);
    out[i * 4] = r;
    out[i * 4 + 1] = g;
    out[i * 4 + 2] = b;
    out[i * 4 + 3] = a;
  }
  return out;
}
