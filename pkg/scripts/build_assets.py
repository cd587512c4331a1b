#!/usr/bin/env python3
"""Regenerate the bundled .bif networks under src/localcausal/assets/.

Structures (names, cardinalities, parent sets) follow the classic
discrete benchmark networks so node/edge counts and in/out degrees
match the usual catalogs. CPTs are synthetic, drawn from a seeded
additive-logit model: each variable gets a base preference over its
states plus one independent contribution per parent value, so every
parent visibly shifts the child's distribution on its own and no edge
is borderline by construction. Probabilities are clipped away from 0
and 1 so sampled data stays informative at moderate sizes. The two
small fixtures (trace, collider_chain) use hand-picked tables instead.

Run from the repository root:  python scripts/build_assets.py
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parent.parent / "src" / "localcausal" / "assets"

# name -> (cardinality, parents in header order)
TRACE = {
    "A": (2, ["T", "C"]),
    "B": (2, ["T", "A"]),
    "C": (2, []),
    "D": (2, []),
    "E": (2, ["C"]),
    "I": (2, ["D", "K"]),
    "J": (2, []),
    "K": (2, ["T", "D"]),
    "L": (2, ["T"]),
    "T": (2, ["E", "J"]),
}

# P(var = s1 | parent combo), combos in C-order over the header parents.
TRACE_P1 = {
    "A": [0.2, 0.65, 0.7, 0.9],
    "B": [0.2, 0.7, 0.6, 0.85],
    "C": [0.45],
    "D": [0.55],
    "E": [0.25, 0.75],
    "I": [0.2, 0.65, 0.6, 0.85],
    "J": [0.4],
    "K": [0.15, 0.6, 0.55, 0.9],
    "L": [0.25, 0.75],
    "T": [0.15, 0.6, 0.7, 0.85],
}

COLLIDER_CHAIN = {
    "F": (2, []),
    "X": (2, []),
    "Y": (2, ["F", "X"]),
    "T": (2, ["Y"]),
    "Z": (2, ["T"]),
}

COLLIDER_CHAIN_P1 = {
    "F": [0.45],
    "X": [0.55],
    "Y": [0.15, 0.65, 0.6, 0.9],
    "T": [0.2, 0.8],
    "Z": [0.25, 0.75],
}

ALARM = {
    "HISTORY": (2, ["LVFAILURE"]),
    "CVP": (3, ["LVEDVOLUME"]),
    "PCWP": (3, ["LVEDVOLUME"]),
    "HYPOVOLEMIA": (2, []),
    "LVEDVOLUME": (3, ["HYPOVOLEMIA", "LVFAILURE"]),
    "LVFAILURE": (2, []),
    "STROKEVOLUME": (3, ["HYPOVOLEMIA", "LVFAILURE"]),
    "ERRLOWOUTPUT": (2, []),
    "HRBP": (3, ["ERRLOWOUTPUT", "HR"]),
    "HREKG": (3, ["ERRCAUTER", "HR"]),
    "ERRCAUTER": (2, []),
    "HRSAT": (3, ["ERRCAUTER", "HR"]),
    "INSUFFANESTH": (2, []),
    "ANAPHYLAXIS": (2, []),
    "TPR": (3, ["ANAPHYLAXIS"]),
    "EXPCO2": (4, ["ARTCO2", "VENTLUNG"]),
    "KINKEDTUBE": (2, []),
    "MINVOL": (4, ["INTUBATION", "VENTLUNG"]),
    "FIO2": (2, []),
    "PVSAT": (3, ["FIO2", "VENTALV"]),
    "SAO2": (3, ["PVSAT", "SHUNT"]),
    "PAP": (3, ["PULMEMBOLUS"]),
    "PULMEMBOLUS": (2, []),
    "SHUNT": (2, ["INTUBATION", "PULMEMBOLUS"]),
    "INTUBATION": (3, []),
    "PRESS": (4, ["INTUBATION", "KINKEDTUBE", "VENTTUBE"]),
    "DISCONNECT": (2, []),
    "MINVOLSET": (3, []),
    "VENTMACH": (4, ["MINVOLSET"]),
    "VENTTUBE": (4, ["DISCONNECT", "VENTMACH"]),
    "VENTLUNG": (4, ["INTUBATION", "KINKEDTUBE", "VENTTUBE"]),
    "VENTALV": (4, ["INTUBATION", "VENTLUNG"]),
    "ARTCO2": (3, ["VENTALV"]),
    "CATECHOL": (2, ["ARTCO2", "INSUFFANESTH", "SAO2", "TPR"]),
    "HR": (3, ["CATECHOL"]),
    "CO": (3, ["HR", "STROKEVOLUME"]),
    "BP": (3, ["CO", "TPR"]),
}

INSURANCE = {
    "GoodStudent": (2, ["Age", "SocioEcon"]),
    "Age": (3, []),
    "SocioEcon": (4, ["Age"]),
    "RiskAversion": (4, ["Age", "SocioEcon"]),
    "VehicleYear": (2, ["SocioEcon", "RiskAversion"]),
    "ThisCarDam": (4, ["RuggedAuto", "Accident"]),
    "RuggedAuto": (3, ["VehicleYear", "MakeModel"]),
    "Accident": (4, ["Antilock", "Mileage", "DrivQuality"]),
    "MakeModel": (5, ["SocioEcon", "RiskAversion"]),
    "DrivQuality": (3, ["RiskAversion", "DrivingSkill"]),
    "Mileage": (4, []),
    "Antilock": (2, ["VehicleYear", "MakeModel"]),
    "DrivingSkill": (3, ["Age", "SeniorTrain"]),
    "SeniorTrain": (2, ["Age", "RiskAversion"]),
    "ThisCarCost": (4, ["ThisCarDam", "Theft", "CarValue"]),
    "Theft": (2, ["AntiTheft", "HomeBase", "CarValue"]),
    "CarValue": (5, ["VehicleYear", "MakeModel", "Mileage"]),
    "HomeBase": (4, ["SocioEcon", "RiskAversion"]),
    "AntiTheft": (2, ["SocioEcon", "RiskAversion"]),
    "PropCost": (4, ["ThisCarCost", "OtherCarCost"]),
    "OtherCarCost": (4, ["RuggedAuto", "Accident"]),
    "OtherCar": (2, ["SocioEcon"]),
    "MedCost": (4, ["Age", "Accident", "Cushioning"]),
    "Cushioning": (4, ["RuggedAuto", "Airbag"]),
    "Airbag": (2, ["VehicleYear", "MakeModel"]),
    "ILiCost": (4, ["Accident"]),
    "DrivHist": (3, ["RiskAversion", "DrivingSkill"]),
}

CHILD = {
    "BirthAsphyxia": (2, []),
    "Disease": (6, ["BirthAsphyxia"]),
    "Age": (3, ["Disease", "Sick"]),
    "LVH": (2, ["Disease"]),
    "DuctFlow": (3, ["Disease"]),
    "CardiacMixing": (4, ["Disease"]),
    "LungParench": (3, ["Disease"]),
    "LungFlow": (3, ["Disease"]),
    "Sick": (2, ["Disease"]),
    "HypDistrib": (2, ["DuctFlow", "CardiacMixing"]),
    "HypoxiaInO2": (3, ["CardiacMixing", "LungParench"]),
    "CO2": (3, ["LungParench"]),
    "ChestXray": (5, ["LungParench", "LungFlow"]),
    "Grunting": (2, ["LungParench", "Sick"]),
    "LVHreport": (2, ["LVH"]),
    "LowerBodyO2": (4, ["HypDistrib", "HypoxiaInO2"]),
    "RUQO2": (4, ["HypoxiaInO2"]),
    "CO2Report": (2, ["CO2"]),
    "XrayReport": (5, ["ChestXray"]),
    "GruntingReport": (2, ["Grunting"]),
}


def child10() -> dict:
    """Ten tiled copies of the child network plus seven bridge edges."""
    net = {}
    for k in range(1, 11):
        for name, (card, parents) in CHILD.items():
            net[f"{name}_{k}"] = (card, [f"{p}_{k}" for p in parents])
    for k in range(1, 8):
        card, parents = net[f"BirthAsphyxia_{k + 1}"]
        net[f"BirthAsphyxia_{k + 1}"] = (card,
                                         parents + [f"GruntingReport_{k}"])
    return net


def random_rows(rng: np.random.Generator, dims: list[int], r: int) -> np.ndarray:
    """CPT rows for one variable, one row per parent combination.

    logits(row, state) = base(state) + sum over parents of
    effect(parent value, state) + a small row-specific wobble; rows are
    softmaxed and squashed into [0.015, 1 - 0.015*(r-1)].
    """
    n_rows = int(np.prod(dims)) if dims else 1
    logits = np.tile(rng.normal(0.0, 0.25, size=r), (n_rows, 1))
    combos = np.unravel_index(np.arange(n_rows), dims) if dims else ()
    for axis, d in enumerate(dims):
        effect = rng.normal(0.0, 3.4, size=(d, r))
        logits += effect[combos[axis]]
    logits += rng.normal(0.0, 0.15, size=(n_rows, r))
    q = np.exp(logits - logits.max(axis=1, keepdims=True))
    q /= q.sum(axis=1, keepdims=True)
    return 0.015 + (1.0 - 0.015 * r) * q


def fmt(p: float) -> str:
    return f"{p:.8f}"


def rows_from_p1(p1: list[float]) -> np.ndarray:
    rows = np.empty((len(p1), 2))
    rows[:, 1] = p1
    rows[:, 0] = 1.0 - rows[:, 1]
    return rows


def write_bif(path: Path, name: str, spec: dict,
              tables: dict[str, np.ndarray]) -> None:
    lines = [f"network {name} {{", "}"]
    for var, (card, _parents) in spec.items():
        states = ", ".join(f"s{i}" for i in range(card))
        lines.append(f"variable {var} {{")
        lines.append(f"  type discrete [ {card} ] {{ {states} }};")
        lines.append("}")
    for var, (card, parents) in spec.items():
        rows = tables[var]
        if not parents:
            lines.append(f"probability ( {var} ) {{")
            lines.append(f"  table {', '.join(fmt(p) for p in rows[0])};")
            lines.append("}")
            continue
        head = ", ".join(parents)
        lines.append(f"probability ( {var} | {head} ) {{")
        dims = [spec[p][0] for p in parents]
        for idx in range(rows.shape[0]):
            combo = np.unravel_index(idx, dims)
            key = ", ".join(f"s{c}" for c in combo)
            lines.append(f"  ( {key} ) {', '.join(fmt(p) for p in rows[idx])};")
        lines.append("}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def build(name: str, spec: dict, seed: int,
          fixed: dict[str, list[float]] | None = None) -> None:
    rng = np.random.Generator(np.random.PCG64(seed))
    tables = {}
    for var, (card, parents) in spec.items():
        if fixed is not None:
            tables[var] = rows_from_p1(fixed[var])
        else:
            dims = [spec[p][0] for p in parents]
            tables[var] = random_rows(rng, dims, card)
    write_bif(OUT / f"{name}.bif", name, spec, tables)
    n_edges = sum(len(ps) for _, ps in spec.values())
    print(f"{name}: {len(spec)} variables, {n_edges} edges")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    build("trace", TRACE, seed=0, fixed=TRACE_P1)
    build("collider_chain", COLLIDER_CHAIN, seed=0, fixed=COLLIDER_CHAIN_P1)
    build("alarm", ALARM, seed=4)
    build("insurance", INSURANCE, seed=20260402)
    build("child", CHILD, seed=20260403)
    build("child10", child10(), seed=20260404)


if __name__ == "__main__":
    main()
