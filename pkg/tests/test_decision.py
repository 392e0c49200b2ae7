"""The decision procedure end to end: classical laws, both verdict
paths, witnesses, invariances, and report shape."""

import random
from fractions import Fraction

import pytest

from mzkernel.algebra import LinearMap, alg_make, is_idempotent
from mzkernel.characters import primitive_idempotents
from mzkernel.decision import (
    MAX_GROUP_ORDER,
    MAX_ROWS,
    DecisionError,
    Eq31Failure,
    ZeroSumSubset,
    decide,
    instance_gamma,
    verify_witness,
)
from mzkernel.fields import FieldError, FieldSpec, field_make
from mzkernel.groups import GroupSpec

MZ, NOTMZ = "MZ", "NotMZ"


def F(text):
    return field_make(FieldSpec.parse(text))


def G(text):
    return GroupSpec.parse(text)


def mk(fld, rows_int):
    return [[fld.from_int(v) for v in row] for row in rows_int]


def identity_row(fld, n):
    return mk(fld, [[1] + [0] * (n - 1)])


# ---------------------------------------------------------------------------
# the classical subspace of zero-identity-coefficient elements

def _p_prime_part(n, p):
    while n % p == 0:
        n //= p
    return n


VG_LAW_CASES = [
    # (field, group): split holds in every case
    ("GF(4)", "Z6"), ("GF(7)", "Z6"), ("GF(3)", "Z6"), ("Q(zeta_6)", "Z6"),
    ("GF(2)", "Z4"), ("GF(3)", "Z2 x Z2 x Z3"), ("GF(13)", "Z12"),
    ("GF(5)", "Z4"), ("GF(7)", "Z3"), ("GF(4)", "Z3"), ("Q(zeta_2)", "Z2"),
    ("Q(zeta_12)", "Z12"), ("GF(9)", "Z12"), ("GF(2)", "Z2 x Z2"),
]


@pytest.mark.parametrize("field_text,group_text", VG_LAW_CASES)
def test_identity_coefficient_law(field_text, group_text):
    # MZ exactly when the characteristic is zero or exceeds the p'-part
    fld, grp = F(field_text), G(group_text)
    rep = decide(fld, grp, identity_row(fld, grp.order))
    p = fld.characteristic
    expect = MZ if p == 0 or p > _p_prime_part(grp.order, p) else NOTMZ
    assert rep.verdict == expect, (field_text, group_text, rep.reason)
    assert rep.pre.is_vg
    assert not rep.pre.identity_coefficient_all_zero
    assert verify_witness(rep)


def test_vg_notmz_witness_over_gf4_z6():
    rep = decide(F("GF(4)"), G("Z6"), identity_row(F("GF(4)"), 6))
    assert rep.verdict == NOTMZ and rep.reason == "zero-sum-subset"
    assert rep.witness.columns == (1, 2)
    assert rep.column_group.orders == (3,)
    assert rep.modular.p == 2 and rep.modular.sylow.order == 2
    assert rep.search is not None and rep.search.exact


def test_vg_notmz_witness_over_gf3_z2z2z3():
    fld = F("GF(3)")
    rep = decide(fld, G("Z2 x Z2 x Z3"), identity_row(fld, 12))
    assert rep.verdict == NOTMZ
    assert len(rep.witness.columns) == 3  # three ones sum to zero in char 3
    assert verify_witness(rep)


@pytest.mark.parametrize("field_text", ["GF(4)", "GF(7)", "Q(zeta_6)"])
def test_all_ones_rows_give_the_augmentation_ideal(field_text):
    fld = F(field_text)
    rep = decide(fld, G("Z6"), mk(fld, [[1] * 6]))
    assert rep.verdict == MZ
    assert rep.pre.is_ideal and not rep.pre.is_vg


def test_constant_rows_still_flag_ideal():
    fld = F("GF(7)")
    rep = decide(fld, G("Z6"), mk(fld, [[3] * 6, [5] * 6]))
    assert rep.pre.is_ideal
    assert rep.verdict == MZ


# ---------------------------------------------------------------------------
# verdict paths and witnesses

def test_offset_equation_failure_is_the_first_violation():
    fld = F("GF(2)")
    rep = decide(fld, G("Z2"), mk(fld, [[0, 1]]))
    assert rep.verdict == NOTMZ and rep.reason == "offset-equation-failure"
    assert rep.witness == Eq31Failure(row=1, character=1, offset=2)
    assert verify_witness(rep)
    assert rep.search is None  # equations are checked before any search


def test_zero_map_is_trivially_mz():
    fld = F("GF(2)")
    rep = decide(fld, G("Z4"), mk(fld, [[0, 0, 0, 0]]))
    assert rep.verdict == MZ and rep.reason == "zero-map"
    assert rep.gamma is None and rep.column_group is None
    assert rep.witness is None
    assert verify_witness(rep)


def test_semisimple_reason_strings():
    fld = F("GF(7)")
    rep = decide(fld, G("Z6"), identity_row(fld, 6))
    assert rep.reason == "no-zero-sum-subset"
    rep = decide(fld, G("Z6"), mk(fld, [[1, 0, 0, 0, 0, 3]]))
    if rep.verdict == NOTMZ:
        assert rep.reason == "zero-sum-subset"


def test_modular_mz_reason_string():
    fld = F("GF(3)")
    rep = decide(fld, G("Z6"), identity_row(fld, 6))
    assert rep.verdict == MZ and rep.reason == "modular-conditions-hold"


def test_census_gf2_z4_single_rows():
    fld = F("GF(2)")
    grp = G("Z4")
    verdicts = {}
    for bits in range(16):
        row = [(bits >> i) & 1 for i in range(4)]
        rep = decide(fld, grp, mk(fld, [row]))
        verdicts[bits] = rep.verdict
        assert verify_witness(rep)
        # d = 1: everything hinges on the offset equations at the identity
        expect = MZ if (row[0] == 1 or bits == 0) else NOTMZ
        assert rep.verdict == expect, row
    assert sum(v == MZ for v in verdicts.values()) == 9


def test_census_gf4_z3_single_rows():
    fld = F("GF(4)")
    grp = G("Z3")
    counts = {MZ: 0, NOTMZ: 0}
    for code in range(64):
        row = [fld.element((code >> (2 * i)) & 3) for i in range(3)]
        rep = decide(fld, grp, [row])
        counts[rep.verdict] += 1
        assert verify_witness(rep)
    assert counts == {MZ: 28, NOTMZ: 36}


# ---------------------------------------------------------------------------
# validation and flags

def test_size_caps_and_override():
    fld = F("Q(zeta_65)")
    grp = G("Z65")
    rows = mk(fld, [[1] * 65])
    with pytest.raises(DecisionError):
        decide(fld, grp, rows)
    rep = decide(fld, grp, rows, unsafe_large=True)
    assert rep.verdict == MZ
    assert grp.order > MAX_GROUP_ORDER

    fld2 = F("GF(3)")
    many = mk(fld2, [[1, 0]] * (MAX_ROWS + 1))
    with pytest.raises(DecisionError):
        decide(fld2, G("Z2"), many)
    rep = decide(fld2, G("Z2"), many, unsafe_large=True)
    assert rep.verdict == MZ and rep.pre.rows_reduced


def test_input_validation():
    fld = F("GF(2)")
    with pytest.raises(DecisionError):
        decide(fld, G("Z2"), [])
    with pytest.raises(DecisionError):
        decide(fld, G("Z2"), mk(fld, [[1, 0, 0]]))


def test_split_requirement_is_enforced():
    with pytest.raises(FieldError):
        decide(F("GF(5)"), G("Z3"), identity_row(F("GF(5)"), 3))
    with pytest.raises(FieldError):
        # modular case: the p'-part Z3 has no characters over GF(2)
        decide(F("GF(2)"), G("Z6"), identity_row(F("GF(2)"), 6))
    with pytest.raises(FieldError):
        decide(F("Q"), G("Z3"), identity_row(F("Q"), 3))


def test_rows_reduced_flag_and_rank():
    fld = F("GF(7)")
    rep = decide(fld, G("Z3"), mk(fld, [[1, 0, 0], [2, 0, 0]]))
    assert rep.pre.rows_reduced
    assert len(rep.pre.reduced_rows) == 1
    assert rep.pre.is_vg
    rep = decide(fld, G("Z3"), mk(fld, [[1, 0, 0]]))
    assert not rep.pre.rows_reduced


def test_vg_flag_requires_nonzero_identity_column_only():
    fld = F("GF(7)")
    rep = decide(fld, G("Z3"), mk(fld, [[4, 0, 0]]))
    assert rep.pre.is_vg
    rep = decide(fld, G("Z3"), mk(fld, [[1, 1, 0]]))
    assert not rep.pre.is_vg


def _random_rows(fld, n, r, rng, *, zero_identity=False):
    rows = []
    for _ in range(r):
        if fld.characteristic:
            row = [fld.element(rng.randrange(fld.cardinality)) for _ in range(n)]
        else:
            row = [fld.from_rational(rng.randint(-2, 2)) for _ in range(n)]
        if zero_identity:
            row[0] = fld.zero
        rows.append(row)
    return rows


@pytest.mark.parametrize("field_text,group_text", [
    ("GF(4)", "Z6"), ("GF(9)", "Z12"), ("Q(zeta_6)", "Z6"), ("GF(7)", "Z6"),
])
def test_zero_identity_coefficients_force_notmz(field_text, group_text):
    # every nonzero map whose rows all kill the identity basis vector has
    # a non-MZ kernel; the main criterion must reach the same answer
    fld, grp = F(field_text), G(group_text)
    rng = random.Random(f"idzero:{field_text}:{group_text}")
    seen_nonzero = 0
    for _ in range(25):
        rows = _random_rows(fld, grp.order, rng.randint(1, 2), rng,
                            zero_identity=True)
        rep = decide(fld, grp, rows)
        assert rep.pre.identity_coefficient_all_zero
        if rep.pre.reduced_rows:
            seen_nonzero += 1
            assert rep.verdict == NOTMZ, rows
            assert verify_witness(rep)
        else:
            assert rep.verdict == MZ and rep.reason == "zero-map"
    assert seen_nonzero > 10


# ---------------------------------------------------------------------------
# witness semantics

@pytest.mark.parametrize("field_text,group_text", [
    ("GF(7)", "Z6"), ("Q(zeta_6)", "Z6"), ("GF(13)", "Z2 x Z2"),
])
def test_zero_sum_witness_yields_an_idempotent_in_the_kernel(field_text, group_text):
    # sum of the witness columns' primitive idempotents is a nonzero
    # idempotent inside Ker L, the definitional obstruction to MZ
    fld, grp = F(field_text), G(group_text)
    rng = random.Random(f"wid:{field_text}:{group_text}")
    alg = alg_make(fld, grp)
    idems = primitive_idempotents(grp, fld)
    hits = 0
    for _ in range(40):
        rows = _random_rows(fld, grp.order, rng.randint(1, 2), rng)
        rep = decide(fld, grp, rows)
        if rep.verdict != NOTMZ:
            continue
        hits += 1
        lmap = LinearMap(alg, rows)
        u = alg.zero
        for c in rep.witness.columns:
            u = u + idems[c - 1]
        assert not u.is_zero()
        assert is_idempotent(u)
        assert lmap.in_kernel(u)
    assert hits > 5


def test_tampered_witnesses_fail_verification():
    fld = F("GF(4)")
    rep = decide(fld, G("Z6"), identity_row(fld, 6))
    assert rep.verdict == NOTMZ
    good = rep.witness
    rep.witness = ZeroSumSubset(columns=(1,))
    assert not verify_witness(rep)
    rep.witness = ZeroSumSubset(columns=())
    assert not verify_witness(rep)
    rep.witness = good
    assert verify_witness(rep)

    fld2 = F("GF(2)")
    rep2 = decide(fld2, G("Z2"), mk(fld2, [[0, 1]]))
    rep2.witness = Eq31Failure(row=1, character=1, offset=1)
    assert not verify_witness(rep2)  # offset 1 is the gamma matrix itself


# ---------------------------------------------------------------------------
# invariances

def _random_invertible(fld, r, rng):
    # small search: random r x r matrices until one row-reduces to rank r
    from mzkernel.decision import row_reduce
    while True:
        mat = [[fld.element(rng.randrange(fld.cardinality)) if fld.characteristic
                else fld.from_rational(rng.randint(-2, 2)) for _ in range(r)]
               for _ in range(r)]
        if len(row_reduce(fld, mat)) == r:
            return mat


def _mat_apply(fld, m, rows):
    r = len(rows)
    n = len(rows[0])
    out = []
    for i in range(r):
        row = []
        for k in range(n):
            acc = fld.zero
            for j in range(r):
                acc = acc + m[i][j] * rows[j][k]
            row.append(acc)
        out.append(row)
    return out


@pytest.mark.parametrize("field_text,group_text", [
    ("GF(4)", "Z6"), ("GF(7)", "Z6"), ("Q(zeta_6)", "Z6"),
])
def test_row_space_invariance(field_text, group_text):
    # the verdict, the dead/live split and witness existence depend only
    # on the row space of L
    fld, grp = F(field_text), G(group_text)
    rng = random.Random(f"rowspace:{field_text}:{group_text}")
    for _ in range(12):
        r = rng.randint(1, 3)
        rows = _random_rows(fld, grp.order, r, rng)
        base = decide(fld, grp, rows)
        m = _random_invertible(fld, r, rng)
        mixed = decide(fld, grp, _mat_apply(fld, m, rows))
        assert mixed.verdict == base.verdict
        assert mixed.dead_columns == base.dead_columns
        assert mixed.live_columns == base.live_columns
        assert (mixed.witness is None) == (base.witness is None)


def test_isomorphic_presentations_agree():
    # transport L along the canonical isomorphism Z6 -> Z2 x Z3
    z6, z23 = G("Z6"), G("Z2 x Z3")
    for field_text in ("GF(7)", "Q(zeta_6)", "GF(4)"):
        fld = F(field_text)
        rng = random.Random(f"iso:{field_text}")
        for _ in range(10):
            rows6 = _random_rows(fld, 6, rng.randint(1, 2), rng)
            rows23 = []
            for row in rows6:
                out = [fld.zero] * 6
                for a in range(6):
                    out[z23.index((a % 2, a % 3))] = row[z6.index((a,))]
                rows23.append(out)
            rep6 = decide(fld, z6, rows6)
            rep23 = decide(fld, z23, rows23)
            assert rep6.verdict == rep23.verdict


# ---------------------------------------------------------------------------
# reports and helpers

def test_report_json_shape_semisimple():
    fld = F("GF(7)")
    rep = decide(fld, G("Z6"), identity_row(fld, 6))
    out = rep.as_json()
    assert out["verdict"] == MZ
    assert out["field"] == "GF(7)" and out["group"] == "Z6"
    assert out["rows"] == 1 and out["rank"] == 1
    assert out["flags"] == {"is_ideal": False, "is_vg": True,
                            "identity_coefficient_all_zero": False}
    assert out["column_group"] == "Z6"
    assert out["dead_columns"] == [] and len(out["live_columns"]) == 6
    assert out["witness"] is None
    assert "modular" not in out
    assert out["search"]["path"] == "gray-python"
    assert out["search"]["exact"] is True


def test_report_json_shape_modular():
    fld = F("GF(4)")
    rep = decide(fld, G("Z6"), identity_row(fld, 6))
    out = rep.as_json()
    assert out["verdict"] == NOTMZ
    assert out["modular"] == {"p": 2, "sylow_order": 2, "coprime_order": 3}
    assert out["witness"] == {"type": "zero_sum_subset", "columns": [1, 2]}
    assert out["column_group"] == "Z3"


def test_equation_failure_json():
    fld = F("GF(2)")
    rep = decide(fld, G("Z2"), mk(fld, [[0, 1]]))
    assert rep.as_json()["witness"] == {
        "type": "equation_failure", "row": 1, "character": 1, "offset": 2,
    }


def test_instance_gamma_matches_decide():
    fld = F("GF(4)")
    grp = G("Z6")
    rows = identity_row(fld, 6)
    pre, gamma, column_group = instance_gamma(fld, grp, rows)
    rep = decide(fld, grp, rows)
    assert column_group == rep.column_group
    assert gamma.entries == rep.gamma.entries
    # zero map carries no gamma
    pre, gamma, column_group = instance_gamma(fld, grp, mk(fld, [[0] * 6]))
    assert gamma is None and column_group is None
    # semisimple case: columns over the full group
    pre, gamma, column_group = instance_gamma(F("GF(7)"), grp, identity_row(F("GF(7)"), 6))
    assert column_group == grp and gamma.cols == 6
