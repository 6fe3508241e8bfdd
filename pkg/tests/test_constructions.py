"""Construction machinery: linkage, addons, pairing, duplication, and the
closed-form size polynomials."""

import pytest

from cdckit.cdc import Cdc, lifted_mrd, spread
from cdckit.constructions import (CompositionProfile, ConstructionError,
                                  DistancePartition, FORMULAS,
                                  MissingImportError, NdkSequence, RECIPES,
                                  SeqEntry, check_special_substructure,
                                  cor1_bound, coset_addon, duplication,
                                  mixed_abar_addons, multiblock_linkage,
                                  pairing_construction, product_addon,
                                  recipe_12_8_6, recipe_3k_4_k, recipe_8_4_4,
                                  recipe_9_4_3, size_10_4_5_claimed,
                                  size_10_4_5_linkage, size_12_4_4_cor,
                                  size_12_4_4_thm, size_12_6_6, size_12_8_6,
                                  size_8_4_4, xi_extension, _single_full)
from cdckit.gf import field_new
from cdckit.rankmetric import gabidulin_mrd
from cdckit.subspace import Subspace, distance
from cdckit.verify import coverage_check, full_pairwise_check, sampled_check

F2 = field_new(2, 1)


def _unit(idxs, n):
    return Subspace.from_rows(F2, [[1 if c == i else 0 for c in range(n)]
                                   for i in idxs], n)


# ----------------------------------------------------------------------
# closed forms
# ----------------------------------------------------------------------

def test_cor1_bound_reference_values():
    assert cor1_bound(2, 4, 4, (4, 4, 4), (1, 1, 1)) == 19208388
    assert cor1_bound(2, 4, 4, (8, 4), (4801, 1)) == 19673822


def test_size_polynomials_at_q2():
    assert size_8_4_4(2) == 4797
    assert size_12_4_4_thm(2) == 19660413
    assert size_12_4_4_cor(2) == 19673822
    assert size_12_6_6(2) == 16865629
    assert size_10_4_5_linkage(2) == 1178312
    assert size_10_4_5_claimed(2) == 1179336
    assert size_12_8_6(2) == 262165
    assert size_12_8_6(2) == 2 ** 18 + (2 ** 6 - 1) // (2 ** 2 - 1)


def test_formula_registry_dispatch():
    assert FORMULAS["A_q(8,4;4)"](2) == 4797
    assert FORMULAS["A_q(12,4;4)_cor"](2) == 19673822
    assert FORMULAS["A_q(12,6;6)"](2) == 16865629
    assert FORMULAS["A_q(4k,2k;2k)"](2, k=4) > 0
    assert FORMULAS["A_q(6k,2k;2k)"](2, k=4) > FORMULAS["A_q(4k,2k;2k)"](2, k=4)


# ----------------------------------------------------------------------
# linkage
# ----------------------------------------------------------------------

def test_linkage_spread_instance():
    # q=2, k=2, two blocks of width 4, d = 2k: an 85-line spread of F_2^8
    profile = CompositionProfile(2, 2, 4, (4, 4))
    C = [spread(2, 4, 2), spread(2, 4, 2)]
    M = [gabidulin_mrd(2, 2, 4, 2), gabidulin_mrd(2, 2, 4, 2)]
    c = multiblock_linkage(profile, C, M)
    assert c.size == 85
    c.words()
    assert coverage_check(c)["ok"]


def test_recipe_8_4_4_size_and_substructure():
    c, expected = recipe_8_4_4(2)
    assert expected == 4797 and c.size == 4797
    rep = sampled_check(c, 20000, seed=0)
    assert rep.ok and rep.min_distance_found == 4
    check_special_substructure(c)


def test_linkage_rejects_bad_profiles():
    with pytest.raises(ConstructionError):
        CompositionProfile(2, 4, 4, (4,)).validate()
    with pytest.raises(ConstructionError):
        CompositionProfile(2, 4, 3, (4, 4)).validate()
    with pytest.raises(ConstructionError):
        CompositionProfile(2, 4, 4, (3, 4)).validate()
    with pytest.raises(ConstructionError):
        CompositionProfile(2, 5, 4, (5, 5), (2, 3), (2, 1)).validate(with_ab=True)


# ----------------------------------------------------------------------
# addons
# ----------------------------------------------------------------------

def test_coset_addon_and_xi_extension_12_6_6():
    profile = CompositionProfile(2, 6, 6, (6, 6), (3, 3), (1, 2))
    addon = coset_addon(profile)
    assert addon.size == 512
    ext = xi_extension(profile, addon)
    assert ext.size == 16
    merged = Cdc(F2, 12, 6, 6, words=addon.words() + ext.words())
    rep = full_pairwise_check(merged)
    assert rep.ok and rep.min_distance_found == 6


def test_mixed_abar_rejection_and_frozen_counterexample():
    # the two dimension splits (2,3) and (3,2) only separate by pivot
    # distance 2, and an explicit distance-2 pair exists across them
    p1 = CompositionProfile(2, 5, 4, (5, 5), (2, 3), (1, 2))
    p2 = CompositionProfile(2, 5, 4, (5, 5), (3, 2), (2, 1))
    with pytest.raises(ConstructionError):
        mixed_abar_addons([p1, p2])
    a1, a2 = coset_addon(p1), coset_addon(p2)
    U1 = _unit([0, 1, 5, 6, 7], 10)
    U2 = _unit([0, 1, 2, 5, 6], 10)
    assert U1.gen.rows in set(w.gen.rows for w in a1.words())
    assert U2.gen.rows in set(w.gen.rows for w in a2.words())
    assert distance(U1, U2) == 2


def test_mixed_abar_accepts_separated_splits():
    # splits whose dimension vectors differ by >= d are certified
    p1 = CompositionProfile(2, 6, 4, (6, 6), (2, 4), (1, 3))
    p2 = CompositionProfile(2, 6, 4, (6, 6), (4, 2), (3, 1))
    mixed = mixed_abar_addons([p1, p2])
    rep = sampled_check(mixed, 20000, seed=0)
    assert rep.ok and rep.min_distance_found >= 4


def test_product_addon_checks_cross_families():
    profile = CompositionProfile(2, 4, 4, (4, 4), (2, 2), (1, 1))
    w0 = _unit([0, 1], 4)
    w1 = _unit([2, 3], 4)
    with pytest.raises(ConstructionError):
        # the same 2-subspace in both families of block 0: distance 0 < 2
        product_addon(profile, [[[w0], [w0]], [[w0], [w1]]])


# ----------------------------------------------------------------------
# pairing
# ----------------------------------------------------------------------

def test_pairing_12_8_6_counts_and_structure():
    c, expected = recipe_12_8_6(2)
    assert expected == 262165 and c.size == 262165
    rep = sampled_check(c, 20000, seed=0)
    assert rep.ok and rep.min_distance_found >= 8


# ----------------------------------------------------------------------
# duplication
# ----------------------------------------------------------------------

def _lmrd_entry():
    lm = lifted_mrd(2, 6, 3, 4)
    unit = _unit([0, 1, 2], 6)
    hole = _unit([3, 4, 5], 6)
    return lm, SeqEntry(lm, unit, hole)


def test_duplication_small_instance():
    lm, entry = _lmrd_entry()
    from cdckit.cdc import partial_spread_subcode
    c0 = partial_spread_subcode(lm, "lmrd_nested")
    assert c0.size == 8
    c0_keys = set(w.gen.rows for w in c0.words())
    rest = [w for w in lm.words() if w.gen.rows not in c0_keys]
    part = DistancePartition(lm, [list(c0.words()), rest])
    seq = NdkSequence([entry, entry])
    A = _single_full(2, 3)
    c = duplication(part, seq, A)
    assert c.size == 1 + 8 * 64 + 56 * 64 == 4097
    assert (c.n, c.k) == (9, 3)


def test_partition_and_sequence_validation():
    lm, entry = _lmrd_entry()
    base = Cdc(F2, 6, 3, 4, words=lm.words())
    words = base.words()
    # a partition whose first part is not a partial spread must fail
    close = next(w for w in words[1:] if distance(words[0], w) == 4)
    rest = [w for w in words if w not in (words[0], close)]
    bad = DistancePartition(base, [[words[0], close], rest])
    with pytest.raises(ConstructionError):
        bad.validate()
    # overlapping parts must fail
    with pytest.raises(ConstructionError):
        DistancePartition(base, [words, words[:1]]).validate()
    # a sequence witness inside the witness subspace must fail
    with pytest.raises(ConstructionError):
        NdkSequence([SeqEntry(entry.code, entry.witness_s,
                              entry.witness_s)]).validate()
    NdkSequence([entry, entry]).validate()


def test_recipes_require_their_imports():
    with pytest.raises(MissingImportError):
        recipe_9_4_3(2)
    with pytest.raises(MissingImportError):
        recipe_3k_4_k(2, 5)
    from cdckit.constructions import recipe_10_4_5, size_3k_4_k
    base, _ = recipe_10_4_5(2)
    _, expected = recipe_3k_4_k(2, 5, base=base)
    assert expected == size_3k_4_k(2, 5, base.size)


def test_recipe_registry_complete():
    assert set(RECIPES) == {"8_4_4", "12_4_4_cor", "12_4_4_thm", "12_6_6",
                            "10_4_5", "4k_2k_2k", "12_8_6", "3k_4_k",
                            "16_4_4", "6k_2k_2k", "9_4_3", "10_4_3"}
