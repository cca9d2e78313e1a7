"""Serialization of suite results and the figures that go with them."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

CSV_FIELDS = ("suite", "prime", "label", "n", "required_valuation", "achieved_valuation", "pass", "conjectural")


def _rows(results):
    for res in results:
        for cell in res.cells:
            for rep in cell.reports:
                label = rep.spec.get("label", "")
                for v in rep.verdicts:
                    d = v.to_json()
                    yield {
                        "suite": res.name,
                        "prime": cell.p,
                        "label": label,
                        "n": json.dumps(d["n"]),
                        "required_valuation": d["required_valuation"],
                        "achieved_valuation": d["achieved_valuation"],
                        "pass": d["pass"],
                        "conjectural": rep.conjectural,
                    }
            for name, ok in cell.checks.items():
                yield {"suite": res.name, "prime": cell.p, "label": name, "n": "", "required_valuation": "",
                       "achieved_valuation": "", "pass": ok, "conjectural": False}


def to_csv(results) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in _rows(results):
        w.writerow(row)
    return buf.getvalue()


def to_json(results, timestamp: str | None = None) -> str:
    doc = {"suites": [r.to_json() for r in results], "passed": all(r.passed for r in results)}
    if timestamp is not None:
        doc["timestamp"] = timestamp
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


def to_human(results) -> str:
    out = []
    for res in results:
        out.append(f"== {res.name}: {'PASS' if res.passed else 'FAIL'}")
        if res.skipped:
            out.append(f"   inadmissible primes skipped: {res.skipped}")
        for cell in res.cells:
            out.extend("   " + line for line in cell.lines())
    return "\n".join(out) + "\n"


def render(results, fmt: str) -> str:
    if fmt == "json":
        return to_json(results)
    if fmt == "csv":
        return to_csv(results)
    return to_human(results)


# -- figures -------------------------------------------------------------------

def _margins(res):
    """(prime, margin) pairs; exact zeros sit one step above the largest finite margin."""
    pts = []
    for cell in res.cells:
        for rep in cell.reports:
            for v in rep.verdicts:
                m = None if v.achieved == float("inf") else v.achieved - v.required
                pts.append((cell.p, m, v.passed, rep.conjectural))
    finite = [m for _, m, _, _ in pts if m is not None]
    top = (max(finite) if finite else 0) + 1
    return [(p, top if m is None else m, ok, conj) for p, m, ok, conj in pts], top


def write_figures(results, out_dir) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for res in results:
        pts, top = _margins(res)
        if not pts:
            continue
        fig, ax = plt.subplots(figsize=(6, 3.5))
        for ok, colour in ((True, "tab:blue"), (False, "tab:red")):
            sel = [(p, m) for p, m, good, _ in pts if good == ok]
            if sel:
                ax.scatter([p for p, _ in sel], [m for _, m in sel], s=12, c=colour, alpha=0.6,
                           label="pass" if ok else "fail")
        ax.axhline(0, color="grey", lw=0.8)
        ax.axhline(top, color="grey", lw=0.5, ls=":")
        ax.set_xlabel("p")
        ax.set_ylabel("achieved - required valuation")
        ax.set_title(f"{res.name} (dotted line: exact zero)")
        ax.legend(loc="lower right", fontsize=8)
        fig.tight_layout()
        path = out_dir / f"margin_{res.name}.png"
        fig.savefig(path, dpi=110)
        plt.close(fig)
        written.append(path)
    primes = sorted({c.p for r in results for c in r.cells})
    if primes:
        fig, ax = plt.subplots(figsize=(1 + 0.45 * len(primes), 0.6 + 0.45 * len(results)))
        grid = []
        for res in results:
            row = {c.p: (1.0 if c.passed else 0.0) for c in res.cells}
            grid.append([row.get(p, 0.5) for p in primes])
        ax.imshow(grid, cmap="RdYlGn", vmin=0, vmax=1, aspect="auto")
        ax.set_xticks(range(len(primes)), [str(p) for p in primes], fontsize=7)
        ax.set_yticks(range(len(results)), [r.name for r in results], fontsize=8)
        ax.set_title("pass (green) / fail (red) / not run (yellow)", fontsize=9)
        fig.tight_layout()
        path = out_dir / "summary.png"
        fig.savefig(path, dpi=110)
        plt.close(fig)
        written.append(path)
    return written
