"""End-to-end scenario: clean-intersection data through every layer.

Models the plumbing example: two 7-spheres meeting in three projective
planes, with the framing-induced grading shifts of 8 between the
components. Each component contributes three intersection points at
one action level; there are no connecting trajectories, so the
differential is zero and the filtration quotients are the component
homologies. The user-declared cohomology module is the wedge of
shifted three-class blocks, and the square-chain bound doubles the
bare count.
"""

from __future__ import annotations

import json

from floerbound import cli, morse
from floerbound.bounds import BoundCertificate, steenrod_bound, verify_certificate
from floerbound.stmod import application_module


def intersection_complex(k: int) -> morse.MorseComplex:
    gens = []
    for block in range(k):
        action = float(k - block)  # earlier blocks at higher action
        for offset in (0, 2, 4):
            gens.append((f"b{block}d{offset}", 8 * block + offset, action))
    return morse.build_complex(gens, [])


def test_three_component_filtration_recovers_the_blocks():
    cx = intersection_complex(3)
    thresholds = [2.5, 1.5, 0.5]
    levels = morse.les(cx, thresholds)
    assert len(levels) == 3
    for block, level in enumerate(levels):
        assert all(level["exact"].values())
        assert not level["maps"]["connect"].blocks
        assert level["dims"]["quotient"] == {8 * block: 1, 8 * block + 2: 1,
                                             8 * block + 4: 1}
    # the full level at the last threshold carries everything
    assert sum(levels[-1]["dims"]["level"].values()) == 9


def test_declared_cohomology_gives_the_doubled_bound():
    cx = intersection_complex(3)
    h = morse.homology(cx)
    m = application_module(3)
    # homology dims agree with the declared module degree-by-degree
    assert {d: len(names) for d, names in m.basis.items()} == h.dims
    cert = steenrod_bound(m, 7, "auto")
    assert cert.bound == 6
    ok, failures = verify_certificate(m, 7, cert)
    assert ok, failures
    # a certificate replayed against the wrong dimension is refused
    ok, failures = verify_certificate(m, 8, cert)
    assert not ok and any(f["kind"] == "wrong-n" for f in failures)
    # and the claimed schedule really alternates class, square, gap
    assert [c.to_json() for c in cert.chains] == [
        {"start_degree": 2, "start": [0], "exponents": [2], "end_degree": 4},
        {"start_degree": 10, "start": [0], "exponents": [2], "end_degree": 12},
        {"start_degree": 18, "start": [0], "exponents": [2], "end_degree": 20},
    ]


def test_cli_round_trip_of_the_same_scenario(capsys, monkeypatch):
    import io

    doc = json.dumps({
        "kind": "complex",
        "generators": [
            {"name": f"b{b}d{o}", "grading": 8 * b + o, "action": float(3 - b)}
            for b in range(3) for o in (0, 2, 4)
        ],
        "incidence": [],
    })
    monkeypatch.setattr("sys.stdin", io.StringIO(doc))
    assert cli.main(["morse", "les", "--thresholds", "2.5,1.5,0.5"]) == 0
    les_out = json.loads(capsys.readouterr().out)
    assert [lv["dims"]["quotient"] for lv in les_out["levels"]] == [
        {"0": 1, "2": 1, "4": 1},
        {"8": 1, "10": 1, "12": 1},
        {"16": 1, "18": 1, "20": 1},
    ]
    assert cli.main(["build", "application", "--k", "3"]) == 0
    built = capsys.readouterr().out
    monkeypatch.setattr("sys.stdin", io.StringIO(built))
    assert cli.main(["bound", "steenrod", "--n", "7", "--auto"]) == 0
    assert json.loads(capsys.readouterr().out)["bound"] == 6
