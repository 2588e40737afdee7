"""Context diagrams, sections, gluing laws, operator extendability."""
import json

import numpy as np
import pytest

from obslat import context as cx
from obslat.acceptance import fixture_diagram, fixture_section
from obslat.errors import InputError, PreconditionError, ResourceError

AZ = np.diag([0.0, 1.0]).astype(complex)
AX = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)


def test_diagram_closes_under_intersection():
    dia = fixture_diagram()
    assert [c.name for c in dia.contexts] == ["Az", "Ax", "Ax&Az"]
    assert dia.pool_labels == ("Az:{1}", "Az:{2}", "Az:{1,2}",
                               "Ax:{1}", "Ax:{2}")
    # the intersection of the two masas is the scalars, so no extra
    # scalars context is appended
    inter = dia.context_named("Ax&Az")
    assert len(inter.minimal) == 1
    assert np.allclose(inter.minimal[0], np.eye(2))


def test_intersection_name_ignores_argument_order():
    d1 = cx.diagram({"Az": [AZ], "Ax": [AX]}, dim=2)
    d2 = cx.diagram({"Ax": [AX], "Az": [AZ]}, dim=2)
    assert sorted(c.name for c in d1.contexts) == \
        sorted(c.name for c in d2.contexts) == ["Ax", "Ax&Az", "Az"]


def test_single_context_gets_a_scalars_context():
    dia = cx.diagram({"D": [AZ]}, dim=2)
    assert [c.name for c in dia.contexts] == ["D", "scalars"]


def test_construction_errors():
    with pytest.raises(InputError):
        cx.diagram({})
    with pytest.raises(InputError):
        cx.diagram({"A": [AZ], "B": [np.diag([0.0, 1.0, 2.0])]})
    with pytest.raises(InputError):
        cx.context_from_generators("bad", [AZ, AX])
    with pytest.raises(ResourceError):
        cx.context_from_generators("big", [np.diag(np.arange(7.0))])


def test_projection_element_bridge():
    dia = fixture_diagram()
    az = dia.context_named("Az")
    for e in az.nonzero_elements():
        assert az.element_of(az.projection_of(e)) == e
    with pytest.raises(PreconditionError):
        az.element_of(dia.context_named("Ax").minimal[0])
    with pytest.raises(InputError):
        dia.context_named("nope")


def test_fixture_section_breaks_the_joint_law_only():
    """The headline example: consistent in every context, no joint refinement.
    The pairwise-commuting law holds, the unrestricted law fails, and no
    selfadjoint operator induces it."""
    dia = fixture_diagram()
    section = fixture_section(dia)
    ok, witness = cx.is_global_section(dia, section)
    assert ok and witness is None
    report = cx.glue_section(dia, section)
    assert report.values == (1.0, 2.0, 2.0, 1.5, 2.0)
    assert report.commuting_ok and report.commuting_witness is None
    assert not report.increasing_ok
    assert report.increasing_witness == {
        "members": ["Az:{1}", "Ax:{1}"], "join": "Az:{1,2}",
        "value": 2.0, "sup_of_values": 1.5}
    assert report.extendable == "no"
    assert report.certificate == {"reason": "more-values-than-dimension",
                                  "values": [1.0, 1.5, 2.0]}
    json.dumps(report.summary())


def test_operator_section_round_trip():
    dia = fixture_diagram()
    a = np.diag([0.3, 1.2]).astype(complex)
    section = cx.section_from_operator(dia, a)
    assert section["Az"] == {1: 0.3, 2: 1.2, 3: 1.2}
    assert section["Ax"] == {1: 1.2, 2: 1.2, 3: 1.2}
    ok, _ = cx.is_global_section(dia, section)
    assert ok
    report = cx.glue_section(dia, section)
    assert report.extendable == "yes"
    assert report.certificate == {"reason": "verified-candidate"}
    again = cx.section_from_operator(dia, report.operator)
    assert again == section


def test_identity_operator_values_everything_one():
    dia = fixture_diagram()
    section = cx.section_from_operator(dia, np.eye(2))
    assert all(v == 1.0 for vals in section.values() for v in vals.values())


def test_section_validation():
    dia = fixture_diagram()
    good = fixture_section(dia)
    missing_ctx = {k: dict(v) for k, v in good.items() if k != "Ax"}
    with pytest.raises(InputError):
        cx.is_global_section(dia, missing_ctx)
    partial = {k: dict(v) for k, v in good.items()}
    del partial["Az"][1]
    with pytest.raises(InputError):
        cx.is_global_section(dia, partial)
    nan = {k: dict(v) for k, v in good.items()}
    nan["Az"][1] = float("nan")
    with pytest.raises(InputError):
        cx.is_global_section(dia, nan)


def test_global_section_witness_kinds():
    dia = fixture_diagram()
    good = fixture_section(dia)

    sunk_top = {k: dict(v) for k, v in good.items()}
    sunk_top["Az"][3] = 0.5
    ok, w = cx.is_global_section(dia, sunk_top)
    assert not ok
    assert w == {"kind": "not-increasing-in-context", "context": "Az",
                 "family": ["{1}", "{2}"], "join": "{1,2}",
                 "value": 0.5, "sup_of_values": 2.0}

    clash = {k: dict(v) for k, v in good.items()}
    clash["Ax"] = {e: 3.0
                   for e in dia.context_named("Ax").nonzero_elements()}
    ok, w = cx.is_global_section(dia, clash)
    assert not ok
    assert w == {"kind": "inconsistent-across-contexts",
                 "projection": "Az:{1,2}", "contexts": ["Az", "Ax"],
                 "values": [2.0, 3.0]}
    with pytest.raises(PreconditionError):
        cx.pool_values(dia, clash)


def test_extendability_certificates():
    dia = fixture_diagram()
    # pool order: Az:{1}, Az:{2}, Az:{1,2}, Ax:{1}, Ax:{2}
    verdict, cert, _ = cx._extendability(dia, [1.0, 2.0, 1.0, 1.0, 1.0])
    assert verdict == "no"
    assert cert == {"reason": "value-above-top", "projection": "Az:{2}",
                    "value": 2.0, "top": 1.0}
    # two different lines at the low level span the whole space
    verdict, cert, _ = cx._extendability(dia, [1.0, 2.0, 2.0, 2.0, 1.0])
    assert verdict == "no"
    assert cert == {"reason": "full-span-below-top", "level": 1.0}
    verdict, cert, op = cx._extendability(dia, [1.0, 2.0, 2.0, 2.0, 2.0])
    assert verdict == "yes"
    assert np.allclose(op, np.diag([1.0, 2.0]))


def test_dim3_fixture_is_undetermined():
    """A 45 degree rotation inside the top-left plane keeps the candidate
    constructible but inexact, and in dimension three a failing candidate is
    not conclusive."""
    c, s = np.cos(np.pi / 4), np.sin(np.pi / 4)
    u = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])
    az = np.diag([0.0, 1.0, 2.0]).astype(complex)
    ax = (u @ np.diag([0.0, 1.0, 2.0]) @ u.T).astype(complex)
    dia = cx.diagram({"Az": [az], "Ax": [ax]}, dim=3)
    assert [c_.name for c_ in dia.contexts] == \
        ["Az", "Ax", "Ax&Az", "scalars"]

    section = {}
    for ctx in dia.contexts:
        low = {"Az": 1.0, "Ax": 1.5}.get(ctx.name)
        vals = {e: 2.0 for e in ctx.nonzero_elements()}
        if low is not None:
            ats = [e for e in ctx.nonzero_elements()
                   if e in ctx.lattice.atoms()]
            vals[ats[0]] = low
        section[ctx.name] = vals
    ok, _ = cx.is_global_section(dia, section)
    assert ok
    report = cx.glue_section(dia, section)
    assert report.commuting_ok
    assert not report.increasing_ok
    assert report.extendable == "undetermined"
    assert report.certificate == {"reason": "candidate-not-conclusive"}


def test_operator_dimension_mismatch():
    dia = fixture_diagram()
    with pytest.raises(InputError):
        cx.section_from_operator(dia, np.diag([0.0, 1.0, 2.0]))
