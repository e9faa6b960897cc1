"""Run every check on an :class:`ActionConfig` and render the report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .config import ActionConfig, parse
from .errors import DegenerateChoice, HypertorusError, SemanticError
from .exactmath import I, Mat, conj
from .group import (
    FiniteAffineGroup,
    check_presentation,
    format_word,
    generate,
    verify_free_action,
)
from .hodge import (
    build_hodge,
    eigen_decompose,
    invariant_end_dim,
    sample_family,
    swap_check,
)
from .lattice import Lattice, add_generator, index, module_lattice
from .torus import AffineTorusMap, TorusSpec, descend, realify

__all__ = ["BUNDLED", "VerificationReport", "build_action", "emit", "load_bundled", "run"]

BUNDLED = ("d4_extended.action", "d4_module.action")

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def load_bundled(name: str) -> str:
    if not name.endswith(".action"):
        name += ".action"
    if name not in BUNDLED:
        raise FileNotFoundError(name)
    return resources.files("hypertorus.data").joinpath(name).read_text()


def _s(x) -> str:
    return str(x)


def _sv(v) -> list[str]:
    return [str(x) for x in v]


@dataclass
class VerificationReport:
    """Nested, JSON-ready result tree plus the overall verdict."""

    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.data.get("verdict") == "pass"

    def failing_expectations(self) -> list[str]:
        return [k for k, v in self.data.get("expectations", {}).items() if not v["ok"]]

    def to_machine(self) -> str:
        return json.dumps(self.data, indent=2, ensure_ascii=False) + "\n"


def build_action(cfg: ActionConfig) -> tuple[TorusSpec, dict[str, AffineTorusMap]]:
    """Torus with its (possibly extended) lattice and the descended generators."""
    base = TorusSpec.product(cfg.periods)
    n = base.real_dim
    lattice = base.lattice
    module_basis = None
    if cfg.module is not None:
        m = cfg.module
        mult = m.multiplier if m.real else realify(m.multiplier, base)
        lattice = module_lattice(mult, m.generators, m.plain)
        cols = []
        for v in m.generators:
            cols += [v, mult @ v]
        cols += list(m.plain)
        if len(cols) != n:
            raise SemanticError("module basis (g, x g, ..., plain) must have exactly 2g vectors")
        module_basis = Mat.from_columns(cols)
        if module_basis.det() == 0 or abs(module_basis.det()) != lattice.covolume:
            raise SemanticError("module vectors (g, x g, ..., plain) are not a basis of the module lattice")
        base = base.with_lattice(lattice)
    for v in cfg.extensions:
        lattice = add_generator(lattice, v)

    maps = {}
    for gen in cfg.generators:
        if gen.basis == "module":
            M = module_basis @ gen.linear @ module_basis.inv()
            t = module_basis @ gen.translation
            f = AffineTorusMap(base, M, t)
        elif gen.real:
            f = AffineTorusMap(base, gen.linear, gen.translation)
        else:
            f = AffineTorusMap(base, realify(gen.linear, base), gen.translation, linear_complex=gen.linear)
        maps[gen.name] = descend(f, lattice) if lattice != base.lattice else f
    return base.with_lattice(lattice), maps


def _linear_order(M: Mat, bound: int = 12) -> int | None:
    P, Id = M, Mat.identity(M.rows)
    for k in range(1, bound + 1):
        if P == Id:
            return k
        P = P @ M
    return None


def _certificate_tree(cert, f) -> dict:
    if cert.free:
        return {
            "kind": "functional",
            "lattice_coords": [int(x) for x in cert.functional],
            "ambient_coords": _sv(cert.functional_ambient),
            "value_on_translation": _s(cert.value_on_translation(f)),
            "verified": cert.verify(f),
        }
    return {"kind": "witness", "point": _sv(cert.witness), "verified": cert.verify(f)}


def _element_rows(G: FiniteAffineGroup) -> tuple[list, object, object]:
    full = verify_free_action(G, use_classes=False)
    by_class = verify_free_action(G, use_classes=True)
    rows = []
    for v in full.elements:
        f = G.elements[v.index]
        row = {
            "index": v.index,
            "word": format_word(v.word),
            "order": v.order,
            "is_translation": v.is_translation,
            "free": v.free,
            "translation": _sv(f.translation),
        }
        if v.certificate is not None:
            row["certificate"] = _certificate_tree(v.certificate, f)
        rows.append(row)
    return rows, full, by_class


def _hodge_section(G, maps, trials, seed) -> dict | None:
    rotation = involution = None
    for name, f in maps.items():
        o = _linear_order(f.linear)
        if rotation is None and o == 4:
            rotation = name
        elif involution is None and o == 2:
            involution = name
    if rotation is None or involution is None:
        return None
    R, S = maps[rotation].linear, maps[involution].linear
    decomp = eigen_decompose(R, 4)
    out = {
        "rotation": rotation,
        "involution": involution,
        "eigen_dims": decomp.dims(),
        "swap_ok": swap_check(S, decomp),
    }
    V1, Vi = decomp.basis(1), decomp.basis(I)
    preferred = []
    if len(V1) == 2 and len(Vi) == 2:
        # coefficient pair (1, i) in both eigenspaces
        preferred.append(
            (
                tuple(a + I * b for a, b in zip(*V1)),
                tuple(a + I * b for a, b in zip(*Vi)),
            )
        )
    stats = sample_family(decomp, S, trials=trials, seed=seed, candidates=preferred)
    out["param_dim"] = stats.param_dim
    out["nondegenerate_fraction"] = _s(stats.nondegenerate_fraction)
    candidate = None
    for u1, ui in preferred:
        try:
            candidate = build_hodge(decomp, S, u1, ui)
        except DegenerateChoice:
            pass
    if candidate is not None:
        out["candidate"] = {
            "u1": [_s(x) for x in candidate.u1],
            "ui": [_s(x) for x in candidate.ui],
            "J": [[_s(x) for x in candidate.J.row(i)] for i in range(candidate.J.rows)],
        }
        out["deform_dim"] = invariant_end_dim(G, candidate)
    return out


def run(cfg: ActionConfig, seed: int = 0, max_order: int = 1024, trials: int = 100) -> VerificationReport:
    data: dict = {}
    try:
        spec, maps = build_action(cfg)
        data["lattice"] = {
            "basis": [_sv(c) for c in spec.lattice.basis.columns()],
            "index_over_standard": _lattice_index(spec.lattice),
        }
        G = generate(maps, max_order=max_order)
        data["group_order"] = G.order
        data["relations"] = {w: ok for w, ok in zip(cfg.relations, check_presentation(G, cfg.relations))}
        data["generator_orders"] = {name: G.element_order(G.generator(name)) for name in maps}
        rows, full, by_class = _element_rows(G)
        data["elements"] = rows
        data["classes"] = [
            {
                "members": list(c),
                "words": [format_word(G.words[i]) for i in c],
                "representative": c[0],
                "order": G.element_order(c[0]),
            }
            for c in G.classes
        ]
        data["class_check"] = {
            "checked": list(by_class.checked),
            "agrees_with_exhaustive": [e.free for e in by_class.elements] == [e.free for e in full.elements],
        }
        data["free"] = full.all_free
        data["translations"] = list(full.translations)
        data["hyperelliptic_valid"] = full.hyperelliptic_valid
        hodge = _hodge_section(G, maps, trials, seed)
        if hodge is not None:
            data["eigen_dims"] = hodge.pop("eigen_dims")
            data["swap_ok"] = hodge.pop("swap_ok")
            data["deform_dim"] = hodge.pop("deform_dim", None)
            data["hodge"] = hodge
    except HypertorusError as exc:
        data["error"] = {"type": type(exc).__name__, "message": str(exc)}

    data["expectations"] = _compare(cfg.expectations, data)
    ok = "error" not in data and all(v["ok"] for v in data["expectations"].values())
    data["verdict"] = "pass" if ok else "fail"
    return VerificationReport(data)


def _lattice_index(L: Lattice) -> int | None:
    std = Lattice.standard(L.rank)
    try:
        return index(L, std)
    except HypertorusError:
        return None


def _actual(key: str, data: dict):
    if key == "order":
        return data.get("group_order")
    if key == "free":
        return data.get("free")
    if key == "no_translations":
        t = data.get("translations")
        return None if t is None else not t
    if key == "relations":
        rel = data.get("relations")
        return None if rel is None else all(rel.values())
    if key == "classes":
        c = data.get("classes")
        return None if c is None else len(c)
    if key == "deform_dim":
        return data.get("deform_dim")
    if key == "hodge_family_dim":
        return data.get("hodge", {}).get("param_dim")
    if key == "eigen_dims":
        d = data.get("eigen_dims")
        return None if d is None else tuple(d[k] for k in ("i", "-i", "1", "-1"))
    if key == "lattice_index":
        return data.get("lattice", {}).get("index_over_standard")
    raise KeyError(key)


def _compare(expectations: dict, data: dict) -> dict:
    out = {}
    for key, expected in expectations.items():
        actual = _actual(key, data)
        out[key] = {
            "expected": list(expected) if isinstance(expected, tuple) else expected,
            "actual": list(actual) if isinstance(actual, tuple) else actual,
            "ok": actual == expected,
        }
    return out


# --------------------------------------------------------------------------
# rendering


def _table(headers: list[str], rows: list[list]) -> list[str]:
    cells = [[str(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[k]) for r in cells)) if cells else len(h) for k, h in enumerate(headers)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*headers), fmt.format(*("-" * w for w in widths))]
    lines += [fmt.format(*r) for r in cells]
    return [line.rstrip() for line in lines]

def render_text(report: VerificationReport) -> str:
    d = report.data
    out = []
    if "error" in d:
        out.append(f"error: {d['error']['type']}: {d['error']['message']}")
    if "group_order" in d:
        out.append(f"group order: {d['group_order']}")
        lat = d["lattice"]
        out.append(f"lattice index over Z^n: {lat['index_over_standard']}")
        out.append("")
        out += _table(["relation", "holds"], [[w, ok] for w, ok in d["relations"].items()])
        out.append("")
        rows = []
        for e in d["elements"]:
            cert = e.get("certificate")
            if cert is None:
                detail = "identity"
            elif cert["kind"] == "functional":
                detail = f"phi={','.join(cert['ambient_coords'])} phi.t={cert['value_on_translation']}"
            else:
                detail = f"fixed point {','.join(cert['point'])}"
            free = "-" if e["free"] is None else e["free"]
            rows.append([e["index"], e["word"], e["order"], e["is_translation"], free, detail])
        out += _table(["#", "word", "order", "translation", "free", "certificate"], rows)
        out.append("")
        out += _table(
            ["class", "size", "order", "words"],
            [[k, len(c["members"]), c["order"], " ".join(c["words"])] for k, c in enumerate(d["classes"])],
        )
        out.append(f"class representatives checked: {d['class_check']['checked']} "
                   f"(agrees with exhaustive run: {d['class_check']['agrees_with_exhaustive']})")
    if "eigen_dims" in d:
        dims = d["eigen_dims"]
        out.append("")
        out.append("eigenspace dims: " + "  ".join(f"V({k})={v}" for k, v in dims.items()))
        out.append(f"S swaps V(i) and V(-i): {d['swap_ok']}")
        h = d["hodge"]
        out.append(f"Hodge family parameters: {h['param_dim']}  "
                   f"(nondegenerate fraction {h['nondegenerate_fraction']})")
        out.append(f"invariant endomorphism dimension: {d['deform_dim']}")
    if d["expectations"]:
        out.append("")
        out += _table(
            ["expectation", "expected", "actual", "ok"],
            [[k, v["expected"], v["actual"], v["ok"]] for k, v in d["expectations"].items()],
        )
    out.append("")
    out.append(f"verdict: {d['verdict'].upper()}")
    failing = report.failing_expectations()
    if failing:
        out.append("failed: " + ", ".join(failing))
    return "\n".join(out) + "\n"


def emit(report: VerificationReport, fmt: str = "text") -> tuple[str, int]:
    text = report.to_machine() if fmt == "machine" else render_text(report)
    return text, EXIT_PASS if report.passed else EXIT_FAIL


def run_path(path: str, **kwargs) -> VerificationReport:
    p = Path(path)
    text = p.read_text() if p.exists() else load_bundled(p.name)
    return run(parse(text), **kwargs)
