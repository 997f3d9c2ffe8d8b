import pytest

from cuspidal_tables.core.exceptions import GroupEnumerationError
from cuspidal_tables.core.grading import build_theta, cartan_subspace
from cuspidal_tables.core.hecke import parse_group_label
from cuspidal_tables.core.littleweyl import (action_formula_check, braid_relations_check,
                                             evaluate_word, generate_group,
                                             partition_into_classes, restriction_forms)

# reflection gradings small enough to enumerate in the quick suite
PARTITION_CASES = ["3D4,3s", "F4,3s", "F4,4s", "F4,6s", "2E6,4s", "E6,6s"]
TRIALS = 1000


def test_f4_order_four(little_weyl):
    lwg = little_weyl("F4,4s")
    assert len(lwg.classes) == 6
    assert {c.type_label for c in lwg.classes} == {"B2"}
    assert all(c.orbit_count == 2 for c in lwg.classes)
    assert lwg.closure.order == 96
    assert lwg.closure.census == {4: 6}
    assert lwg.closure.fingerprint == parse_group_label("G8")
    for t in lwg.reflections:
        assert t.order == 4
        assert t.local_order == 2
        assert len(t.local_group) == 2
        assert t.rank_one_label == "B2,4s"
        assert t.word_verdict is True
        assert t.nu_generates is True
    assert action_formula_check(lwg.theta, lwg.group, lwg.reflections) is True


def test_f4_order_six(little_weyl):
    lwg = little_weyl("F4,6s")
    assert len(lwg.classes) == 8
    assert all(c.type_label == "A2" and c.orbit_count == 1 for c in lwg.classes)
    assert lwg.closure.fingerprint == parse_group_label("G5")
    assert {t.rank_one_label for t in lwg.reflections} == {"2A2,6s"}
    assert all(t.local_order == 1 and t.nu is None for t in lwg.reflections)
    # the order-six kind carries no closed action formula
    assert action_formula_check(lwg.theta, lwg.group, lwg.reflections) is None


@pytest.mark.parametrize("label", PARTITION_CASES)
def test_classes_partition_the_roots(little_weyl, label):
    lwg = little_weyl(label)
    members = sorted(a for c in lwg.classes for a in c.roots)
    assert members == list(range(lwg.theta.datum.num_roots))
    assert [c.roots[0] for c in lwg.classes] == sorted(c.roots[0] for c in lwg.classes)
    assert len({c.key for c in lwg.classes}) == len(lwg.classes)
    assert all(lwg.class_of_root[a] == c.index for c in lwg.classes for a in c.roots)
    assert all(lwg.class_index(c.key) == c.index for c in lwg.classes)


@pytest.mark.parametrize("label", PARTITION_CASES)
def test_random_words_carry_classes_onto_classes(little_weyl, rng, label):
    lwg = little_weyl(label)
    datum = lwg.theta.datum
    theta = lwg.theta.element
    for _ in range(TRIALS):
        w = datum.identity()
        for _ in range(rng.randint(1, 6)):
            w = w * rng.choice(lwg.reflections).element
        perm = lwg.class_permutation(w)
        a = rng.randrange(datum.num_roots)
        assert lwg.class_of_root[w.apply_root(a)] == perm[lwg.class_of_root[a]]
        assert lwg.class_of_root[theta.apply_root(a)] == lwg.class_of_root[a]


def test_reflections_permute_the_classes(little_weyl):
    lwg = little_weyl("F4,4s")
    for t in lwg.reflections:
        perm = lwg.class_permutation(t.element)
        assert sorted(perm) == list(range(len(lwg.classes)))
        assert perm[t.root_class.index] == t.root_class.index


def test_restriction_forms_never_vanish(record):
    theta = build_theta(record("E6,6s").grading)
    cartan = cartan_subspace(theta)
    forms = restriction_forms(theta, cartan)
    assert len(forms) == theta.datum.num_roots
    assert all(any(x for x in form) for form in forms)
    classes = partition_into_classes(theta, cartan)
    assert sum(len(c.roots) for c in classes) == theta.datum.num_roots


def test_generate_weyl_group(datum):
    g2 = datum("G2")
    gens = [g2.simple_reflection(1), g2.simple_reflection(2)]
    assert generate_group(g2, gens).order == 12
    closure = generate_group(g2, gens, keep_elements=True)
    assert len(closure.elements) == 12
    with pytest.raises(GroupEnumerationError):
        generate_group(g2, gens, bound=5)


def test_evaluate_word_and_braid_relations(datum):
    g2 = datum("G2")
    named = {"a": g2.simple_reflection(1), "b": g2.simple_reflection(2)}
    identity = g2.identity()
    assert evaluate_word("a a", named, identity) == identity
    assert evaluate_word("1", named, identity) == identity
    assert evaluate_word("a b^-1", named, identity) == g2.word([1, 2])
    results = braid_relations_check(
        [{"lhs": "a b a b a b", "rhs": "b a b a b a"}, {"lhs": "a b", "rhs": "b a"},
         {"lhs": "c^6", "rhs": "1"}],
        named, identity, words={"c": "a b"})
    assert [ok for _, ok in results] == [True, False, True]
    with pytest.raises(KeyError):
        evaluate_word("a z", named, identity)
