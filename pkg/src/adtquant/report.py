"""Report rendering: per-vertex results as CSV plus matplotlib figures.

The report path runs every analysis domain the model's annotations support,
writes one delimited table covering all of them, and renders one figure per
domain next to it.  Figures show the goal-relevant vertices in evaluation
order; PAC runs add error bars (probability) or interval whiskers.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .analysis import DOMAINS, analyze, eval_order, leaf_valuation
from .core import AdtGraph, has_errors
from .pac import analyze_pac


def supported_domains(graph: AdtGraph) -> list[str]:
    """Domains for which every needed basic event carries a quantity."""
    out = []
    for domain in DOMAINS:
        _, diags = leaf_valuation(graph, domain)
        if not has_errors(diags):
            out.append(domain)
    return out


def _ordered_vertices(graph: AdtGraph) -> list[str]:
    needed = graph.dependency_closure(graph.goal)
    return [v for v in eval_order(graph) if v in needed]


def _display(graph: AdtGraph, vid: str) -> str:
    v = graph.vertices[vid]
    return v.label if v.label else vid


def write_report(graph: AdtGraph, out_dir: str, pac: bool = False,
                 delta_rule: str = "independent") -> list[str]:
    """Write report.csv and one PNG per supported domain; return the paths."""
    os.makedirs(out_dir, exist_ok=True)
    domains = supported_domains(graph)
    order = _ordered_vertices(graph)
    exact = {d: analyze(graph, d) for d in domains}
    pac_res = {d: analyze_pac(graph, d, delta_rule=delta_rule) for d in domains} if pac else {}

    paths = []
    csv_path = os.path.join(out_dir, "report.csv")
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        header = ["vertex", "label", "kind", "domain", "component", "value"]
        if pac:
            header += ["eps", "delta"]
        w.writerow(header)
        for domain in domains:
            components = ("value",) if domain == "prob" else ("succeed", "fail")
            for vid in order:
                v = graph.vertices[vid]
                kind = "basic" if graph.is_basic(vid) else v.gate_type
                res = exact[domain][vid]
                vals = (res,) if domain == "prob" else res
                for comp, val in zip(components, vals):
                    row = [vid, _display(graph, vid), kind, domain, comp, repr(val)]
                    if pac:
                        pv = pac_res[domain][vid]
                        if domain != "prob":
                            pv = (pv.succeed, pv.fail)[components.index(comp)]
                        row += [repr(pv.eps), repr(pv.delta)]
                    w.writerow(row)
    paths.append(csv_path)

    for domain in domains:
        fig, ax = plt.subplots(figsize=(max(6.0, 0.45 * len(order)), 4.0))
        xs = range(len(order))
        labels = [_display(graph, v) for v in order]
        if domain == "prob":
            ys = [exact[domain][v] for v in order]
            if pac:
                errs = [pac_res[domain][v].eps for v in order]
                ax.bar(xs, ys, yerr=errs, capsize=3, color="#4878a8")
            else:
                ax.bar(xs, ys, color="#4878a8")
            ax.set_ylabel("probability")
            ax.set_ylim(0, 1.05)
        else:
            succ = [exact[domain][v][0] for v in order]
            fail = [exact[domain][v][1] for v in order]
            width = 0.4
            ax.bar([x - width / 2 for x in xs], succ, width, label="succeed",
                   color="#4878a8")
            ax.bar([x + width / 2 for x in xs], fail, width, label="fail",
                   color="#b14746")
            if pac:
                ax.errorbar([x - width / 2 for x in xs], succ,
                            yerr=[pac_res[domain][v].succeed.eps for v in order],
                            fmt="none", ecolor="black", capsize=3)
                ax.errorbar([x + width / 2 for x in xs], fail,
                            yerr=[pac_res[domain][v].fail.eps for v in order],
                            fmt="none", ecolor="black", capsize=3)
            ax.set_ylabel(domain.split("-")[0])
            ax.legend()
        ax.set_xticks(list(xs))
        ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=8)
        ax.set_title(f"{domain} (goal: {_display(graph, graph.goal)})")
        fig.tight_layout()
        png_path = os.path.join(out_dir, f"report_{domain}.png")
        fig.savefig(png_path, dpi=120)
        plt.close(fig)
        paths.append(png_path)
    return paths
