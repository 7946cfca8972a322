"""Regenerate the bundled scenario files in src/deltakit/data.

The data below is transcribed by hand; every file is written through
``serialize_scenario`` so the bundled JSON is always in canonical form.

    python3 tools/build_corpus.py
"""

from __future__ import annotations

import itertools
from pathlib import Path

from deltakit.scenario import parse_scenario, serialize_scenario

OUT = Path(__file__).resolve().parent.parent / "src" / "deltakit" / "data"

TRILINEAR = {
    "H1 H2 H2": "1",
    "H1 H2 H3": "2",
    "H1 H3 H3": "2",
    "H2 H2 H3": "1",
    "H2 H3 H3": "1",
    "H3 H3 H3": "1",
}
THREEFOLD = {"basis": ["H1", "H2", "H3"], "trilinear": TRILINEAR}


def lattice(names, active, gram):
    return {
        "curves": [{"name": n, "active": a} for n, a in zip(names, active)],
        "gram": [[str(x) for x in row] for row in gram],
    }


def with_passive(names, active, gram, passive):
    """Append passive curves given as integer combinations of the listed ones."""
    names, active = list(names), list(active)
    gram = [list(r) for r in gram]
    for pname, combo in passive:
        idx = {n: i for i, n in enumerate(names)}
        row = [sum(c * gram[idx[k]][j] for k, c in combo.items()) for j in range(len(names))]
        self_ = sum(c * row[idx[k]] for k, c in combo.items())
        for r, x in zip(gram, row):
            r.append(x)
        gram.append(row + [self_])
        names.append(pname)
        active.append(False)
    return names, active, gram


def point(name, mults, A="1", offset="0"):
    return {"name": name, "mults": {k: str(v) for k, v in mults.items()}, "A": A, "offset": offset}


# ---------------------------------------------------------------------------

def qp():
    names, active, gram = with_passive(
        ["e0", "e1", "e2"],
        [True] * 3,
        [[-1, 1, 1], [1, -1, 0], [1, 0, -1]],
        [("CQ", {"e0": 3, "e1": 2, "e2": 2}), ("B", {"e0": 1, "e1": 1})],
    )
    Q0 = {"e0": "3", "e1": "2", "e2": "2"}
    return {
        "name": "qp",
        "title": "Q_p on the threefold, refined by the nef curve B = e0 + e1",
        "notes": ["B has B^2 = 0; it is a sweep pivot but never enters a Zariski support."],
        "threefold": THREEFOLD,
        "divisor": {"name": "Qp", "A": "1"},
        "surface": lattice(names, active, gram),
        "chambers": [
            {"range": ["0", "1"], "class": ["1 - u", "1", "1"], "Q": Q0, "N": {}},
            {
                "range": ["1", "2"],
                "class": ["0", "2 - u", "2 - u"],
                "Q": {k: f"({v})*(2 - u)" for k, v in Q0.items()},
                "N": {"CQ": "u - 1"},
            },
        ],
        "refinements": [{"curve": "B", "A": "1", "points": [point("p", {"CQ": 1})]}],
        "expected": {
            "s_divisor": "11/16",
            "s_curve:B": "95/112",
            "f_point:B/p": "1/16",
            "s_point:B/p": "51/56",
            "delta": "56/51",
        },
    }


def s_h3():
    es = [f"e{i}" for i in range(5)]
    ls = [f"l{i}{j}" for i, j in itertools.combinations(range(5), 2)]
    names = es + ls + ["Ct"]
    n = len(names)
    gram = [[0] * n for _ in range(n)]
    pair_of = {f"l{i}{j}": {i, j} for i, j in itertools.combinations(range(5), 2)}
    for a in range(n):
        for b in range(n):
            x, y = names[a], names[b]
            if a == b:
                g = -1
            elif x in es and y in es:
                g = 0
            elif x in es and y in ls:
                g = 1 if int(x[1]) in pair_of[y] else 0
            elif x in ls and y in es:
                g = 1 if int(y[1]) in pair_of[x] else 0
            elif x in ls and y in ls:
                k = len(pair_of[x] & pair_of[y])
                g = 1 if k == 0 else 0
            elif "Ct" in (x, y):
                other = y if x == "Ct" else x
                g = 1 if other in es else 0
            gram[a][b] = g
    active = [True] * n
    # the class h of a line: h^2 = 1, h.e = 0, h.l = 1, h.Ct = 2
    names.append("h")
    active.append(False)
    row = [0] * 5 + [1] * 10 + [2]
    for r, x in zip(gram, row):
        r.append(x)
    gram.append(row + [1])
    names, active, gram = with_passive(names, active, gram, [("Cq", {"e1": 1, "e2": 1, "e3": 1, "e4": 1})])
    sum_e = lambda c: {f"e{i}": c for i in range(1, 5)}
    return {
        "name": "s-h3",
        "title": "The divisor S on the threefold, refined along e0 on the blown-up quartic del Pezzo surface",
        "notes": [
            "Cq is the strict transform of the curve through the four points; its class is e1 + e2 + e3 + e4.",
            "On [1, 3/2] the restricted negative part is (u - 1)(Cq + e0), so d(u) = u - 1.",
        ],
        "threefold": THREEFOLD,
        "divisor": {"name": "S", "A": "1"},
        "surface": lattice(names, active, gram),
        "chambers": [
            {
                "range": ["0", "1"],
                "class": ["1", "1", "1 - u"],
                "Q": {"h": "4 - u", **sum_e("-1")},
                "N": {},
            },
            {
                "range": ["1", "3/2"],
                "class": ["2 - u", "3 - 2*u", "0"],
                "Q": {"h": "7 - 4*u", **sum_e("u - 2")},
                "N": {"Cq": "u - 1", "e0": "u - 1"},
            },
        ],
        "refinements": [
            {"curve": "e0", "A": "2", "points": [point("p", {"l01": 1, "Ct": 1, "Cq": 1})]}
        ],
        "expected": {
            "s_divisor": "227/448",
            "s_curve:e0": "107/56",
            "f_point:e0/p": "39/448",
            "s_point:e0/p": "407/448",
            "delta": "112/107",
        },
    }


def _e2_threefold_chambers():
    return [
        {"range": ["0", "1"], "class": ["1", "1 + u", "1 - u"]},
        {"range": ["1", "2"], "class": ["2 - u", "3 - u", "0"]},
    ]


def e2():
    names, active, gram = with_passive(["s", "l2"], [True, True], [[-1, 1], [1, 0]], [("CE", {"s": 2, "l2": 3})])
    ch = _e2_threefold_chambers()
    ch[0].update(Q={"s": "1 + u", "l2": "2 + u"}, N={})
    ch[1].update(Q={"s": "3 - u", "l2": "5 - 2*u"}, N={"CE": "u - 1"})
    return {
        "name": "e2",
        "title": "The divisor E2 on the threefold, refined along the fiber l2 of the Hirzebruch surface",
        "notes": ["l2 is a Mori generator with l2^2 = 0: it is tested for nefness but never enters a support."],
        "threefold": THREEFOLD,
        "divisor": {"name": "E2", "A": "1"},
        "surface": lattice(names, active, gram),
        "chambers": ch,
        "refinements": [
            {
                "curve": "l2",
                "A": "1",
                "points": [
                    point("s|l2", {"s": 1}),
                    point("CE", {"CE": 1}),
                    point("tangent", {"CE": 2}),
                ],
            }
        ],
        "expected": {
            "s_divisor": "51/56",
            "s_curve:l2": "25/28",
            "base:l2": "75/112",
            "f_point:l2/s|l2": "15/56",
            "f_point:l2/CE": "17/112",
            "s_point:l2/tangent": "109/112",
            "delta": "112/109",
        },
    }


def e2_q_case1():
    names, active, gram = with_passive(
        ["l2", "e1", "s"],
        [True] * 3,
        [[-1, 1, 0], [1, -1, 1], [0, 1, -2]],
        [("CE", {"l2": 3, "e1": 4, "s": 2})],
    )
    ch = _e2_threefold_chambers()
    ch[0].update(Q={"l2": "2 + u", "e1": "3 + 2*u", "s": "1 + u"}, N={})
    ch[1].update(Q={"l2": "5 - 2*u", "e1": "8 - 3*u", "s": "3 - u"}, N={"CE": "u - 1", "e1": "u - 1"})
    return {
        "name": "e2-q-case1",
        "title": "E2 blown up once at the special point, refined along the exceptional curve e1",
        "diagnostic": True,
        "notes": [
            "Diagnostic: the reference integrand for S(V; e1) has a leading factor (u + 1) where the restricted "
            "negative part forces d(u) = u - 1.  Computing with d(u) = u - 1 reproduces the reference total 111/56, "
            "so the factor is a typo in the reference integrand only.",
        ],
        "threefold": THREEFOLD,
        "divisor": {"name": "E2", "A": "1"},
        "surface": lattice(names, active, gram),
        "chambers": ch,
        "refinements": [
            {
                "curve": "e1",
                "A": "2",
                "points": [
                    point("p_l", {"l2": 1}),
                    point("p_C", {"CE": 1}),
                    point("p_s", {"s": 1}),
                ],
            }
        ],
        "expected": {
            "s_curve:e1": "111/56",
            "base:e1": "95/224",
            "f_point:e1/p_l": "15/32",
            "f_point:e1/p_C": "17/112",
            "f_point:e1/p_s": "115/224",
        },
        "reported": {"s_curve:e1": "111/56"},
    }


def e2_q_case2():
    names, active, gram = with_passive(
        ["l2", "e2", "e1", "s"],
        [True] * 4,
        [[-2, 1, 0, 0], [1, -1, 1, 0], [0, 1, -2, 1], [0, 0, 1, -2]],
        [("CE", {"l2": 3, "e2": 6, "e1": 4, "s": 2})],
    )
    ch = _e2_threefold_chambers()
    ch[0].update(Q={"l2": "2 + u", "e2": "5 + 3*u", "e1": "3 + 2*u", "s": "1 + u"}, N={})
    ch[1].update(
        Q={"l2": "5 - 2*u", "e2": "13 - 5*u", "e1": "8 - 3*u", "s": "3 - u"},
        N={"CE": "u - 1", "e1": "u - 1", "e2": "2*u - 2"},
    )
    return {
        "name": "e2-q-case2",
        "title": "E2 blown up twice at the special point, refined along the second exceptional curve e2",
        "diagnostic": True,
        "notes": [
            "The refinement lives on a weighted blowup: sigma = e1/2 enters the point integrand.",
            "The point on e1 is labelled with the letter s in the reference computation; it is p_e here.",
            "A reference bound 277/366 has no traceable derivation and is not asserted.",
        ],
        "threefold": THREEFOLD,
        "divisor": {"name": "E2", "A": "1"},
        "surface": lattice(names, active, gram),
        "chambers": ch,
        "refinements": [
            {
                "curve": "e2",
                "A": "3",
                "sigma": {"e1": "1/2"},
                "points": [
                    point("p_l", {"l2": 1}),
                    point("p_C", {"CE": 1}),
                    point("p_e", {"e1": 1}, A="1/2"),
                ],
            }
        ],
        "expected": {
            "s_curve:e2": "339/112",
            "base:e2": "361/1344",
            "f_point:e2/p_l": "839/1344",
            "f_point:e2/p_C": "17/112",
            "f_point:e2/p_e": "269/1344",
            "s_point:e2/p_e": "15/32",
        },
    }


def d1():
    names, active, gram = with_passive(
        ["h", "l", "g"],
        [True] * 3,
        [[-2, 1, 0], [1, -1, 1], [0, 1, -1]],
        [("e", {"h": 1, "l": 2, "g": 2}), ("r", {"l": 1, "g": 1})],
    )
    base = "28 - u^3"
    return {
        "name": "d1",
        "title": "The divisor D1 with volumes supplied directly, refined on the surface with curves h, l, g",
        "notes": ["l is the strict transform of the line l3+; r and e are passive classes."],
        "divisor": {"name": "D1", "A": "3"},
        "surface": lattice(names, active, gram),
        "chambers": [
            {"range": ["0", "1"], "vol": base, "Q": {"h": "u", "l": "2*u", "g": "u"}, "N": {}},
            {
                "range": ["1", "2"],
                "vol": f"{base} + 1/2*(u - 1)^3",
                "Q": {"h": "(1 + u)/2", "l": "1 + u", "g": "u"},
                "N": {"h": "(u - 1)/2", "l": "u - 1"},
            },
            {
                "range": ["2", "3"],
                "vol": f"{base} + 1/2*(u - 1)^3 + 1/2*(u - 2)^2*(u + 7)",
                "Q": {"h": "3/2", "l": "3", "g": "2"},
                "N": {"h": "(u - 1)/2", "l": "u - 1", "e": "(u - 2)/2"},
            },
            {
                "range": ["3", "4"],
                "vol": "1/2*(7 - u)*(4 - u)*(2 + u)",
                "Q": {"h": "(6 - u)/2", "l": "3", "g": "2"},
                "N": {"h": "u - 2", "l": "u - 1", "e": "(u - 2)/2"},
            },
        ],
        "refinements": [
            {"curve": "g", "A": "1", "sigma": {"h": "1", "l": "2"}, "points": [point("generic", {})]},
            {
                "curve": "l",
                "A": "3",
                "sigma": {"h": "1/2"},
                "points": [
                    point("p_h", {"h": 1}, A="1/2"),
                    point("p_e", {"e": 1}),
                    point("p_g", {"g": 1}),
                ],
            },
            {"curve": "r", "A": "1", "points": [point("q_e", {"e": 1})]},
        ],
        "expected": {
            "s_divisor": "289/112",
            "s_curve:g": "307/448",
            "s_point:g/generic": "227/448",
            "s_curve:l": "309/112",
            "base:l": "21/64",
            "f_point:l/p_h": "3/448",
            "s_point:l/p_h": "75/224",
            "f_point:l/p_e": "23/64",
            "s_point:l/p_e": "11/16",
            "f_point:l/p_g": "5/14",
            "s_curve:r": "75/112",
            "f_point:r/q_e": "23/64",
            "s_point:r/q_e": "97/112",
            "delta": "112/103",
        },
    }


R_NAMES = ["sR", "tp", "fS", "fR", "h1", "h2", "lp", "f2", "sp", "r1", "r2", "r3"]
R_GRAM = [
    [-3, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0],
    [1, -1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0],
    [0, 1, -1, 0, 0, 0, 0, 0, 0, 1, 0, 1],
    [1, 0, 0, -1, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, -2, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, -2, 1, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 1, -1, 0, 0, 0, 1, 1],
    [1, 0, 0, 0, 0, 0, 0, -1, 1, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 1, -1, 1, 1, 0],
    [0, 0, 1, 0, 0, 1, 0, 0, 1, -1, 0, 0],
    [0, 1, 0, 0, 0, 0, 1, 0, 1, 0, -1, 0],
    [0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0, -1],
]


def _vec(xs):
    return {n: x for n, x in zip(R_NAMES, xs) if x != "0"}


def r1():
    names, active, gram = with_passive(R_NAMES, [True] * 12, R_GRAM, [("f", {"tp": 1, "fS": 1})])
    Q1 = ["(u-6)/2", "(3*u-20)/2", "u-9", "0", "3", "6", "8", "1", "4", "1", "2", "0"]
    Q2 = ["(u-6)/2", "(3*u-20)/2", "u-9", "0", "(10-u)/3", "(20-2*u)/3", "9-u", "1", "(9-u)/2", "1", "2", "0"]
    N2 = ["0", "0", "0", "0", "(u-1)/3", "(2*u-2)/3", "u-1", "0", "(u-1)/2", "0", "0", "0"]
    Q3 = ["(u-8)/3", "u-9", "u-9", "0", "(10-u)/3", "(20-2*u)/3", "9-u", "1", "(9-u)/2", "1", "2", "0"]
    N3 = ["(u-2)/6", "(u-2)/2", "0", "0", "(u-1)/3", "(2*u-2)/3", "u-1", "0", "(u-1)/2", "0", "0", "0"]
    Q4 = ["(u-9)/4", "u-9", "u-9", "0", "(10-u)/3", "(20-2*u)/3", "9-u", "(9-u)/4", "(9-u)/2", "1", "(9-u)/2", "0"]
    N4 = ["(u-3)/4", "(u-2)/2", "0", "0", "(u-1)/3", "(2*u-2)/3", "u-1", "(u-5)/4", "(u-1)/2", "0", "(u-5)/2", "0"]
    Q5 = ["(u-9)/4", "u-9", "u-9", "0", "(9-u)/2", "9-u", "9-u", "(9-u)/4", "(9-u)/2", "(9-u)/2", "(9-u)/2", "0"]
    N5 = ["(u-3)/4", "(u-2)/2", "0", "0", "(u-3)/2", "u-3", "u-1", "(u-5)/4", "(u-1)/2", "(u-7)/2", "(u-5)/2", "0"]
    v1 = "28 - u^3/2"
    v2 = f"{v1} + 7/12*(u-1)^3"
    v3 = f"{v2} + 1/6*(u-2)^3"
    v4 = f"{v3} - 7/24*(u-5)^3"
    return {
        "name": "r1",
        "title": "The divisor R1 with volumes supplied directly, refined on the twelve-curve surface",
        "notes": [
            "The twelve curves are linearly dependent in the Neron-Severi group; classes are compared by pairings.",
            "f is the passive class tp + fS.",
        ],
        "divisor": {"name": "R1", "A": "4"},
        "surface": lattice(names, active, gram),
        "chambers": [
            {"range": ["0", "1"], "vol": v1, "Q": _vec(Q1), "N": {}},
            {"range": ["1", "2"], "vol": v2, "Q": _vec(Q2), "N": _vec(N2)},
            {"range": ["2", "5"], "vol": v3, "Q": _vec(Q3), "N": _vec(N3)},
            {"range": ["5", "7"], "vol": v4, "Q": _vec(Q4), "N": _vec(N4)},
            {"range": ["7", "9"], "vol": "(9-u)^3/8", "Q": _vec(Q5), "N": _vec(N5)},
        ],
        "refinements": [
            {
                "curve": "sR",
                "A": "1",
                "sigma": {"tp": "1"},
                "points": [point("p2", {"tp": 1}), point("p4", {"fR": 1}), point("p8", {"f2": 1})],
            },
            {
                "curve": "fS",
                "A": "1",
                "sigma": {"sR": "1/2", "tp": "3/2"},
                "points": [point("p_r1", {"r1": 1}), point("p_r3", {"r3": 1})],
            },
            {"curve": "fR", "A": "1", "points": [point("generic", {})]},
            {
                "curve": "h2",
                "A": "3",
                "sigma": {"h1": "1/2", "lp": "1"},
                "points": [
                    point("p_h5", {"h1": 1}, A="1/2"),
                    point("p_h7", {"lp": 1}),
                    point("p_h10", {"r1": 1}),
                ],
            },
            {
                "curve": "f2",
                "A": "1",
                "sigma": {"sR": "1/2", "tp": "1/2", "sp": "1"},
                "points": [point("p9", {"sp": 1}), point("p12", {"r3": 1})],
            },
            {
                "curve": "f",
                "A": "1",
                "points": [point("q_r1", {"r1": 1}), point("q_r2", {"r2": 1}), point("q_r3", {"r3": 1})],
            },
        ],
        "expected": {
            "s_divisor": "63/16",
            "s_curve:sR": "207/224",
            "base:sR": "13/28",
            "f_point:sR/p2": "15/56",
            "f_point:sR/p4": "23/112",
            "f_point:sR/p8": "25/56",
            "s_point:sR/p8": "51/56",
            "s_curve:fS": "3/8",
            "base:fS": "487/1008",
            "f_point:fS/p_r1": "103/504",
            "f_point:fS/p_r3": "0",
            "s_point:fS/p_r1": "11/16",
            "s_curve:fR": "75/112",
            "s_point:fR/generic": "29/112",
            "s_curve:h2": "309/112",
            "base:h2": "21/64",
            "f_point:h2/p_h5": "3/448",
            "s_point:h2/p_h5": "75/224",
            "f_point:h2/p_h7": "5/14",
            "f_point:h2/p_h10": "23/64",
            "s_curve:f2": "51/56",
            "base:f2": "361/1344",
            "f_point:f2/p9": "839/1344",
            "s_point:f2/p9": "25/28",
            "f_point:f2/p12": "17/112",
            "s_curve:f": "5/16",
            "base:f": "929/1568",
            "f_point:f/q_r1": "149/1568",
            "f_point:f/q_r2": "23/112",
            "f_point:f/q_r3": "0",
            "delta": "64/63",
        },
    }


BUILDERS = [qp, s_h3, e2, e2_q_case1, e2_q_case2, d1, r1]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for build in BUILDERS:
        data = build()
        sc = parse_scenario(data)
        (OUT / f"{sc.name}.json").write_text(serialize_scenario(sc), encoding="utf-8")
        print("wrote", sc.name)


if __name__ == "__main__":
    main()
