"""Tables on dual ideals: the two axioms, reconstruction, and the element
picture.  The independent oracle enumerates every bounded family outright and
compares memberships."""
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from obslat import corpus, observables as ob, stone
from obslat.errors import CheckFailure, InputError, PreconditionError
from obslat.spectral import sample_family, spectral_family
from obslat.stone import principal


def all_bounded_families(lat, values):
    """Every spectral family whose breakpoints draw from the given values."""
    chains = []

    def grow(chain):
        if chain[-1] == lat.one:
            chains.append(list(chain))
        for e in range(lat.n):
            if e != lat.zero and e != chain[-1] and lat.le(chain[-1], e):
                grow(chain + [e])

    for e in range(lat.n):
        if e != lat.zero:
            grow([e])
    fams = []
    for chain in chains:
        for vals in itertools.combinations(sorted(values), len(chain)):
            fams.append(spectral_family(lat, list(zip(vals, chain))))
    return fams


def mo2_example(lattices):
    mo2 = lattices["mo2"]
    return mo2, spectral_family(
        mo2, [(1.0, mo2.index("a")), (2.0, mo2.one)])


def test_example_values_on_ideals(lattices):
    mo2, fam = mo2_example(lattices)
    h = lambda nm: principal(mo2, mo2.index(nm))
    assert ob.observable_from_spectral(fam, h("a")) == 1.0
    assert ob.observable_from_spectral(fam, h("b")) == 2.0
    assert ob.observable_from_spectral(fam, h("1")) == 2.0
    assert ob.observable_from_spectral(fam, h("a'")) == 2.0


def test_unbounded_inside_ideal_refused(lattices):
    mo2 = lattices["mo2"]
    a = mo2.index("a")
    fam = spectral_family(mo2, [(1.0, a)], top=a)
    with pytest.raises(PreconditionError):
        ob.observable_from_spectral(fam, principal(mo2, mo2.index("b")))


def test_full_table_and_roundtrip(lattices):
    mo2, fam = mo2_example(lattices)
    f = ob.observable_table(fam)
    assert f.table_by_name() == {
        "a": 1.0, "a'": 2.0, "b": 2.0, "b'": 2.0, "1": 2.0}
    assert f.image() == [1.0, 2.0]
    rec = ob.reconstruct(f)
    assert rec.breakpoints == fam.breakpoints


def test_square_reconstruction_example(lattices):
    b2 = lattices["b2"]
    p = b2.index("{1}")
    fam = spectral_family(b2, [(0.5, p), (1.5, b2.one)])
    f = ob.observable_table(fam)
    assert f.table_by_name() == {"{1}": 0.5, "{2}": 1.5, "{1,2}": 1.5}
    assert ob.reconstruct(f).breakpoints == ((0.5, p), (1.5, b2.one))


def test_intersection_condition_witness(lattices):
    mo2 = lattices["mo2"]
    vals = {mo2.index("a"): 1.0, mo2.index("a'"): 2.0, mo2.index("b"): 1.5,
            mo2.index("b'"): 2.0, mo2.one: 2.0}
    f = ob.observable(mo2, vals, checked=False)
    ok, witness = ob.check_intersection_condition(f)
    assert not ok
    assert witness == {"family": [["a", "1"], ["b", "1"]],
                       "intersection": ["1"],
                       "value": 2.0, "sup_of_values": 1.5}
    ok, _ = ob.check_upper_semicontinuous(f)
    assert ok
    with pytest.raises(CheckFailure):
        ob.reconstruct(f)
    with pytest.raises(CheckFailure):
        ob.observable(mo2, vals)


def test_usc_witness(lattices):
    mo2 = lattices["mo2"]
    vals = {mo2.index("a"): 2.0, mo2.index("a'"): 2.0, mo2.index("b"): 2.0,
            mo2.index("b'"): 2.0, mo2.one: 1.0}
    f = ob.observable(mo2, vals, checked=False)
    ok, witness = ob.check_upper_semicontinuous(f)
    assert not ok
    assert witness["kind"] == "not-decreasing"
    assert witness["smaller"] == ["1"]
    assert witness["values"] == [1.0, 2.0]


def test_usc_epsilon_witness(lattices):
    mo2, fam = mo2_example(lattices)
    f = ob.observable_table(fam)
    h_a = principal(mo2, mo2.index("a"))
    assert ob.usc_epsilon_witness(f, h_a, 0.5) == mo2.index("a")
    # a broken table has no member certifying the top ideal's value
    bad = ob.observable(mo2, {mo2.index("a"): 2.0, mo2.index("a'"): 2.0,
                              mo2.index("b"): 2.0, mo2.index("b'"): 2.0,
                              mo2.one: 1.0}, checked=False)
    assert ob.usc_epsilon_witness(bad, principal(mo2, mo2.one), 0.1) is None


def test_construction_errors(lattices):
    mo2 = lattices["mo2"]
    with pytest.raises(InputError):
        ob.observable(mo2, {99: 1.0})
    with pytest.raises(InputError):
        ob.observable(mo2, {mo2.zero: 1.0})
    with pytest.raises(InputError):
        ob.observable(mo2, {mo2.index("a"): 1.0})   # not total
    a = mo2.index("a")
    with pytest.raises(InputError):
        # b does not sit under the top a
        ob.observable(mo2, {a: 1.0, mo2.index("b"): 2.0}, top=a)


@pytest.mark.parametrize("name,values", [
    ("chain3", (0.0, 1.0, 2.0)),
    ("b2", (0.0, 0.5, 1.0)),
    ("mo2", (0.0, 1.0)),
])
def test_axioms_accept_exactly_the_family_tables(lattices, name, values):
    lat = lattices[name]
    valid = {}
    for fam in all_bounded_families(lat, values):
        key = tuple(ob.observable_table(fam).values)
        valid.setdefault(key, fam)
    dom = [a for a in range(lat.n) if a != lat.zero]
    accepted = 0
    for combo in itertools.product(values, repeat=len(dom)):
        f = ob.observable(lat, dict(zip(dom, combo)), checked=False)
        ok1, _ = ob.check_intersection_condition(f)
        ok2, _ = ob.check_upper_semicontinuous(f)
        if tuple(f.values) in valid:
            assert ok1 and ok2, combo
            accepted += 1
            rec = ob.reconstruct(f)
            assert tuple(ob.observable_table(rec).values) == tuple(f.values)
        else:
            assert not (ok1 and ok2), combo
    assert accepted == len(valid)


def test_element_picture_bijection(lattices, rng):
    for name in ["mo2", "b3", "o6", "b2xchain3"]:
        lat = lattices[name]
        for _ in range(20):
            fam = sample_family(lat, rng)
            f = ob.observable_table(fam)
            r = ob.r_from_f(f)
            for ideal in stone.enumerate_dual_ideals(lat):
                assert ob.f_from_r(r, ideal) == f.at_ideal(ideal)
            back, ok, witness = ob.observable_from_increasing(r)
            assert ok and witness is None
            assert back.values == f.values


def test_completely_increasing_witness(lattices):
    mo2 = lattices["mo2"]
    r = ob.increasing_function(mo2, {
        mo2.index("a"): 1.0, mo2.index("a'"): 2.0, mo2.index("b"): 1.5,
        mo2.index("b'"): 2.0, mo2.one: 2.0})
    ok, witness = ob.check_completely_increasing(r)
    assert not ok
    assert witness == {"family": ["a", "b"], "join": "1",
                       "value": 2.0, "sup_of_values": 1.5}


def test_quasipoint_table_obstruction(lattices):
    mo2 = lattices["mo2"]
    fixture = {mo2.index("a"): 1.0, mo2.index("b"): 1.5,
               mo2.index("a'"): 2.0, mo2.index("b'"): 2.0}
    ok, witness, fam = ob.observability_criterion(mo2, fixture)
    assert not ok and fam is None
    assert witness["family"] == ["a", "b"]


def test_quasipoint_table_on_boolean(lattices):
    b2 = lattices["b2"]
    atoms = b2.atoms()
    ok, witness, fam = ob.observability_criterion(
        b2, {atoms[0]: 0.5, atoms[1]: 2.0})
    assert ok and witness is None
    f = ob.observable_table(fam)
    assert f.at_element(atoms[0]) == 0.5
    assert f.at_element(b2.one) == 2.0
    with pytest.raises(InputError):
        ob.observability_criterion(b2, {atoms[0]: 0.5})
    with pytest.raises(InputError):
        ob.observability_criterion(lattices["chain3"], {})


def test_restrict_observable_to_block(lattices):
    mo2, fam = mo2_example(lattices)
    f = ob.observable_table(fam)
    block = [mo2.zero, mo2.index("a"), mo2.index("a'"), mo2.one]
    sub_f, sub = ob.restrict_observable(f, block)
    assert sub.is_boolean()
    assert sub_f.table_by_name() == {"a": 1.0, "a'": 2.0, "1": 2.0}
    ok, _ = ob.check_intersection_condition(sub_f)
    assert ok


@settings(max_examples=60, deadline=None)
@given(name=st.sampled_from(["mo2", "b2", "b3", "chain4", "o6"]),
       seed=st.integers(0, 10 ** 6))
def test_reconstruction_roundtrip_sampled(name, seed):
    import random
    lat = corpus.standard_lattices()[name]
    fam = sample_family(lat, random.Random(seed))
    f = ob.observable_table(fam)
    rec = ob.reconstruct(f)
    assert rec.breakpoints == fam.breakpoints
    assert rec.top == fam.top


@settings(max_examples=40, deadline=None)
@given(name=st.sampled_from(["mo2", "b3"]), seed=st.integers(0, 10 ** 6))
def test_restriction_of_table_matches_family_restriction(name, seed):
    """Restricting the family, then tabulating, agrees with the table's own
    restriction wherever both are defined (on the block's principal ideals)."""
    import random
    from obslat.spectral import restrict_family
    lat = corpus.standard_lattices()[name]
    r = random.Random(seed)
    fam = sample_family(lat, r)
    f = ob.observable_table(fam)
    c = r.randrange(lat.n)
    if c == lat.zero:
        return
    sub_fam = restrict_family(fam, c)
    g = ob.observable_table(sub_fam)
    for a in g.domain():
        assert g.at_element(a) == min(
            lam for lam, e in fam.breakpoints if lat.le(a, lat.meet(e, c)))
