"""Batch certification harness with delimited and graphical reports.

Runs the duality certificate over a list of matroids: the fine subdivision
fan, a seeded chain of random stellar subdivisions, and stars at seeded
random cones.  Per-item randomness is derived from the batch seed and the
item name, so reports are byte-identical for a given seed regardless of
ordering or job count.
"""

from __future__ import annotations

import csv
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .bergman import fine_subdivision
from .duality import certify_poincare_duality
from .fan import Fan, star, stellar_subdivision
from .matroid import Matroid


@dataclass
class ItemResult:
    item: str
    variant: str
    dimension: int
    n_rays: int
    n_maximal: int
    ranks: tuple[int, ...]
    torsion_free: bool
    pairing_dets: tuple[int, ...]
    passed: bool
    failure: str | None
    seconds: float


@dataclass
class BatchReport:
    seed: int
    depth: int
    results: list[ItemResult]

    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_obj(self) -> dict:
        return {
            "seed": self.seed,
            "depth": self.depth,
            "all_passed": self.all_passed(),
            "results": [
                {
                    "item": r.item,
                    "variant": r.variant,
                    "dimension": r.dimension,
                    "rays": r.n_rays,
                    "maximal_cones": r.n_maximal,
                    "ranks": list(r.ranks),
                    "torsion_free": r.torsion_free,
                    "pairing_dets": list(r.pairing_dets),
                    "pass": r.passed,
                    "failure": r.failure,
                }
                for r in self.results
            ],
        }

    def to_table(self) -> str:
        header = ("item", "variant", "dim", "rays", "maxcones", "ranks", "dets", "pass", "seconds")
        rows = [header]
        for r in self.results:
            rows.append(
                (
                    r.item,
                    r.variant,
                    str(r.dimension),
                    str(r.n_rays),
                    str(r.n_maximal),
                    "|".join(map(str, r.ranks)),
                    "|".join(map(str, r.pairing_dets)),
                    "yes" if r.passed else f"NO ({r.failure})",
                    f"{r.seconds:.2f}",
                )
            )
        widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
        lines = [f"seed: {self.seed}  depth: {self.depth}"]
        for row in rows:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        lines.append(f"all passed: {'yes' if self.all_passed() else 'no'}")
        return "\n".join(lines) + "\n"

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                [
                    "item", "variant", "dimension", "rays", "maximal_cones",
                    "ranks", "torsion_free", "pairing_dets", "pass", "failure",
                    "seconds",
                ]
            )
            for r in self.results:
                writer.writerow(
                    [
                        r.item, r.variant, r.dimension, r.n_rays, r.n_maximal,
                        "|".join(map(str, r.ranks)),
                        int(r.torsion_free),
                        "|".join(map(str, r.pairing_dets)),
                        int(r.passed),
                        r.failure or "",
                        f"{r.seconds:.4f}",
                    ]
                )

    def write_figures(self, directory: str) -> list[str]:
        """Render rank profiles and timings as PNGs next to the CSV."""
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        os.makedirs(directory, exist_ok=True)
        paths = []

        base = [r for r in self.results if r.variant == "base"]
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for r in base:
            ax.plot(range(len(r.ranks)), r.ranks, marker="o", label=r.item)
        ax.set_xlabel("degree")
        ax.set_ylabel("rank of the Chow group")
        ax.set_title("Chow rank profiles of the certified fans")
        ax.set_xticks(range(max((len(r.ranks) for r in base), default=1)))
        ax.legend(fontsize=8)
        fig.tight_layout()
        p = os.path.join(directory, "chow_ranks.png")
        fig.savefig(p, dpi=150)
        plt.close(fig)
        paths.append(p)

        fig, ax = plt.subplots(figsize=(7, 0.35 * max(len(self.results), 4) + 1.5))
        labels = [f"{r.item}/{r.variant}" for r in self.results]
        times = [r.seconds for r in self.results]
        colors = ["tab:blue" if r.passed else "tab:red" for r in self.results]
        ax.barh(range(len(labels)), times, color=colors)
        ax.set_yticks(range(len(labels)))
        ax.set_yticklabels(labels, fontsize=7)
        ax.invert_yaxis()
        ax.set_xlabel("certification time (s)")
        ax.set_title("Certification timings")
        fig.tight_layout()
        p = os.path.join(directory, "timings.png")
        fig.savefig(p, dpi=150)
        plt.close(fig)
        paths.append(p)
        return paths


def _certificate_result(item: str, variant: str, F: Fan) -> ItemResult:
    start = time.perf_counter()
    cert = certify_poincare_duality(F)
    elapsed = time.perf_counter() - start
    return ItemResult(
        item=item,
        variant=variant,
        dimension=cert.dimension,
        n_rays=len(F.rays),
        n_maximal=len(F.maximal_cones()),
        ranks=tuple(d.rank for d in cert.degrees),
        torsion_free=cert.all_free,
        pairing_dets=tuple(
            d.pairing_det for d in cert.degrees if d.pairing_det is not None
        ),
        passed=cert.passed,
        failure=cert.failure,
        seconds=elapsed,
    )


def certify_item(args: tuple[str, Matroid, int, int, int]) -> list[ItemResult]:
    """All certificates for one matroid: base fan, stellar chain, stars."""
    name, M, depth, seed, n_stars = args
    rng = random.Random(f"{seed}:{name}")
    out = []
    try:
        F = fine_subdivision(M)
    except Exception as e:
        return [
            ItemResult(
                item=name, variant="base", dimension=-1, n_rays=0, n_maximal=0,
                ranks=(), torsion_free=False, pairing_dets=(), passed=False,
                failure=f"fan construction failed: {e}", seconds=0.0,
            )
        ]
    out.append(_certificate_result(name, "base", F))
    current = F
    for step in range(1, depth + 1):
        candidates = [c for c in sorted(current.cones, key=sorted) if len(c) >= 1]
        if not candidates:
            break
        sigma = rng.choice(candidates)
        current = stellar_subdivision(current, sigma)
        out.append(_certificate_result(name, f"stellar{step}", current))
    cones = sorted(F.cones, key=sorted)
    for i in range(n_stars):
        sigma = rng.choice(cones)
        label = f"star{i + 1}@{list(sorted(sigma))}"
        out.append(_certificate_result(name, label, star(F, sigma)))
    return out


def batch_certify(
    items: list[tuple[str, Matroid]],
    depth: int = 0,
    seed: int = 0,
    jobs: int = 1,
    n_stars: int = 2,
) -> BatchReport:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    work = [(name, M, depth, seed, n_stars) for name, M in items]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(certify_item, work))
    else:
        chunks = [certify_item(w) for w in work]
    results = [r for chunk in chunks for r in chunk]
    return BatchReport(seed=seed, depth=depth, results=results)
