// Pure helpers for the side-by-side view's center kernel-score column.

import type { CompareDTO, KernelPairDTO } from "./types.js";

export interface CenterBar {
  mu: number;
  leftContribution: number;
  rightContribution: number;
  // bar widths as fractions of the largest |contribution| on either side
  leftFraction: number;
  rightFraction: number;
}

/** One bar pair per kernel; widths scale monotonically with |contribution|. */
export function centerBars(pairs: KernelPairDTO[]): CenterBar[] {
  const maxAbs = Math.max(
    1e-12,
    ...pairs.map((p) => Math.max(Math.abs(p.leftContribution), Math.abs(p.rightContribution))),
  );
  return pairs.map((p) => ({
    mu: p.mu,
    leftContribution: p.leftContribution,
    rightContribution: p.rightContribution,
    leftFraction: Math.abs(p.leftContribution) / maxAbs,
    rightFraction: Math.abs(p.rightContribution) / maxAbs,
  }));
}

/** The center column must echo the documents' own breakdowns exactly. */
export function pairsConsistent(dto: CompareDTO): boolean {
  if (dto.perKernelPairs.length !== dto.left.perKernel.length) return false;
  return dto.perKernelPairs.every(
    (p, k) =>
      p.leftContribution === dto.left.perKernel[k].contribution &&
      p.rightContribution === dto.right.perKernel[k].contribution,
  );
}
