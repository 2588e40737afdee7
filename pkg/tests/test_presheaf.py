"""Presheaves on lattices: laws, gluing, stalks, sheafification."""
import pytest

from obslat import classical, presheaf, stone
from obslat.corpus import standard_lattices
from obslat.errors import InputError, PreconditionError, ResourceError


def _chain2_presheaf(break_what=None):
    """Two-point sets on the three-chain, with knobs to break each law."""
    lat = standard_lattices()["chain3"]
    secs = {0: ["x"], 1: ["p", "q"], 2: ["s", "t"]}
    r = {
        (0, 1): {"p": "x", "q": "x"},
        (0, 2): {"s": "x", "t": "x"},
        (1, 2): {"s": "p", "t": "q"},
    }
    if break_what == "missing":
        del r[(1, 2)]
    elif break_what == "partial":
        del r[(1, 2)]["t"]
    elif break_what == "escape":
        r[(1, 2)]["t"] = "zzz"
    elif break_what == "composition":
        r[(0, 2)] = {"s": "x", "t": "y"}
        secs[0] = ["x", "y"]
        r[(0, 1)] = {"p": "x", "q": "x"}
    return presheaf.lattice_presheaf(lat, secs, r)


def test_laws_pass_on_a_good_presheaf():
    ok, witness = presheaf.check_presheaf(_chain2_presheaf())
    assert ok and witness is None


@pytest.mark.parametrize("what,kind", [
    ("missing", "missing-map"),
    ("partial", "partial-map"),
    ("escape", "map-leaves-sections"),
    ("composition", "composition"),
])
def test_laws_catch_each_defect(what, kind):
    ok, witness = presheaf.check_presheaf(_chain2_presheaf(what))
    assert not ok
    assert witness["kind"] == kind


def test_construction_rejects_gaps_and_duplicates():
    lat = standard_lattices()["chain3"]
    with pytest.raises(InputError):
        presheaf.lattice_presheaf(lat, {0: ["x"], 2: ["s"]}, {})
    with pytest.raises(InputError):
        presheaf.lattice_presheaf(lat, {0: ["x", "x"], 1: ["p"], 2: ["s"]},
                                  {})


def test_restrict_direction_and_missing_entry():
    ps = _chain2_presheaf()
    with pytest.raises(PreconditionError):
        ps.restrict(2, 1, "p")
    assert ps.restrict(1, 1, "p") == "p"
    assert ps.restrict(0, 2, "t") == "x"
    broken = _chain2_presheaf("partial")
    with pytest.raises(InputError):
        broken.restrict(1, 2, "t")


def test_spectral_presheaf_fails_gluing_on_mo2():
    """The canonical counterexample: a compatible family over the atoms of
    mo2 with no joint extension, and a two-element cover where three
    different sections all restrict to the same pair."""
    mo2 = standard_lattices()["mo2"]
    ps = presheaf.spectral_presheaf(mo2, [0.0, 1.0])
    assert [len(s) for s in ps.sections] == [1, 2, 2, 2, 2, 6]
    ok, _ = presheaf.check_presheaf(ps)
    assert ok
    report = presheaf.check_sheaf_condition(ps)
    assert not report["ok"]
    assert report["existence"] == {
        "element": "1",
        "cover": ["a", "a'", "b"],
        "family": [[[0.0, "a"]], [[0.0, "a'"]], [[1.0, "b"]]],
        "gluings": [],
    }
    assert report["uniqueness"] == {
        "element": "1",
        "cover": ["a", "a'"],
        "family": [[[1.0, "a"]], [[1.0, "a'"]]],
        "gluings": [[[1.0, "1"]],
                    [[0.0, "b"], [1.0, "1"]],
                    [[0.0, "b'"], [1.0, "1"]]],
    }


def test_spectral_presheaf_is_a_sheaf_on_a_boolean_algebra():
    b2 = standard_lattices()["b2"]
    ps = presheaf.spectral_presheaf(b2, [0.0, 1.0])
    report = presheaf.check_sheaf_condition(ps)
    assert report["ok"]
    assert report["existence"] is None and report["uniqueness"] is None


def test_spectral_presheaf_restriction_is_pointwise_meet():
    mo2 = standard_lattices()["mo2"]
    ps = presheaf.spectral_presheaf(mo2, [0.0, 1.0])
    top = mo2.n - 1
    a = mo2.names.index("a")
    for fam in ps.values_at(top):
        got = ps.restrict(a, top, fam)
        want = presheaf._restrict_key(mo2, fam, a)
        assert got == want
        # restriction to the bottom collapses to the sentinel
        assert ps.restrict(mo2.zero, top, fam) == presheaf._ZERO_SENTINEL


def test_stalks_and_germs():
    mo2 = standard_lattices()["mo2"]
    ps = presheaf.spectral_presheaf(mo2, [0.0, 1.0])
    qs = stone.enumerate_quasipoints(mo2)
    assert [mo2.names[q.generator()] for q in qs] == ["a", "a'", "b", "b'"]
    gen, vals = presheaf.stalk(ps, qs[0])
    assert mo2.names[gen] == "a" and len(vals) == 2
    top = mo2.n - 1
    fam = ps.values_at(top)[0]
    assert ps.section_repr(fam) == [[0.0, "1"]]
    assert ps.section_repr(presheaf.germ(ps, qs[0], top, fam)) == [[0.0, "a"]]
    b = mo2.names.index("b")
    with pytest.raises(PreconditionError):
        presheaf.germ(ps, qs[0], b, ps.values_at(b)[0])


def test_sheafify_mo2_spectral_presheaf():
    """Sections of the germ bundle form a genuine sheaf on the powerset of
    the four quasipoints; the top now has 2^4 sections where the original
    presheaf had 6."""
    mo2 = standard_lattices()["mo2"]
    ps = presheaf.spectral_presheaf(mo2, [0.0, 1.0])
    sheaf, base, masks = presheaf.sheafify(ps)
    assert len(masks) == 4 and base.n == 16
    assert len(sheaf.values_at(base.n - 1)) == 16
    ok, _ = presheaf.check_presheaf(sheaf)
    assert ok
    assert sheaf.section_repr(sheaf.values_at(3)[0]) == \
        [["a", [[0.0, "a"]]], ["a'", [[0.0, "a'"]]]]
    # full gluing scan is too big here; check one disjoint cover by hand
    lo, hi, top = 0b0011, 0b1100, 0b1111
    fam_lo = sheaf.values_at(lo)[0]
    fam_hi = sheaf.values_at(hi)[0]
    glue = [v for v in sheaf.values_at(top)
            if sheaf.restrict(lo, top, v) == fam_lo
            and sheaf.restrict(hi, top, v) == fam_hi]
    assert len(glue) == 1
    assert sheaf.section_repr(glue[0]) == [
        ["a", [[0.0, "a"]]], ["a'", [[0.0, "a'"]]],
        ["b", [[0.0, "b"]]], ["b'", [[0.0, "b'"]]]]


def test_sheafify_b2_gives_a_sheaf_with_full_scan():
    b2 = standard_lattices()["b2"]
    ps = presheaf.spectral_presheaf(b2, [0.0, 1.0])
    sheaf, base, masks = presheaf.sheafify(ps)
    assert len(masks) == 2 and base.n == 4
    assert len(sheaf.values_at(base.n - 1)) == 4
    ok, _ = presheaf.check_presheaf(sheaf)
    assert ok
    report = presheaf.check_sheaf_condition(sheaf)
    assert report["ok"]


def test_function_presheaf_is_a_sheaf():
    sp = classical.sierpinski3()
    ps, lat, opens = presheaf.function_presheaf(sp, [0.0, 1.0])
    assert opens == [0b000, 0b001, 0b011, 0b111]
    assert [len(ps.values_at(i)) for i in range(lat.n)] == [1, 2, 4, 8]
    ok, _ = presheaf.check_presheaf(ps)
    assert ok
    report = presheaf.check_sheaf_condition(ps)
    assert report["ok"]
    assert ps.section_repr(ps.values_at(lat.n - 1)[5]) == \
        [["1", 1.0], ["2", 0.0], ["3", 1.0]]


def test_resource_caps():
    mo2 = standard_lattices()["mo2"]
    ps = presheaf.spectral_presheaf(mo2, [0.0, 1.0])
    with pytest.raises(ResourceError):
        presheaf.check_sheaf_condition(ps, work_cap=3)
    with pytest.raises(ResourceError):
        presheaf.sheafify(ps, cap=3)
    with pytest.raises(ResourceError):
        presheaf.spectral_presheaf(mo2, [0.1 * k for k in range(10)], cap=10)
    with pytest.raises(InputError):
        presheaf.spectral_presheaf(mo2, [])
