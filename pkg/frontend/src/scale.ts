// Size encodings for the transition view. Both scales are strictly
// increasing in their input, so visual order always matches data order.

export const NODE_RADIUS_MIN = 9;
export const NODE_RADIUS_MAX = 34;
export const ARC_WIDTH_MIN = 1.25;
export const ARC_WIDTH_MAX = 9;

/** Pie node radius, monotone in event count (area-ish square-root growth). */
export function nodeRadius(count: number, maxCount: number): number {
  if (maxCount <= 0) return NODE_RADIUS_MIN;
  const t = Math.sqrt(Math.min(count, maxCount) / maxCount);
  return NODE_RADIUS_MIN + (NODE_RADIUS_MAX - NODE_RADIUS_MIN) * t;
}

/** Arc stroke width, monotone in transition count. */
export function arcWidth(count: number, maxCount: number): number {
  if (maxCount <= 0) return ARC_WIDTH_MIN;
  const t = Math.min(count, maxCount) / maxCount;
  return ARC_WIDTH_MIN + (ARC_WIDTH_MAX - ARC_WIDTH_MIN) * t;
}
