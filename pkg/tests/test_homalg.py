import itertools

import pytest

from iwalab.catalog import catalog_module
from iwalab.homalg import (
    Character,
    duality_check,
    eta,
    eta_inverse,
    hom_to_gpring,
    rho,
    verify_eta_natural,
)
from iwalab.modules import FiniteMorphism, coinvariants, norm_morphism
from iwalab.poly import level_basis

TINY = [
    ("lambda-mod-p-T", 2, (1,)),
    ("lambda-mod-p", 2, (1,)),
    ("lambda-mod-p2", 2, (1,)),
    ("lambda-mod-T-minus-p", 3, (1,)),
    ("d2-mod-p-T1", 2, (1, 1)),
    ("lambda-mod-p", 3, (0,)),
]


def act(X, i, x):
    G = X.actions[i]
    return tuple(sum(G[r][c] * x[c] for c in range(X.rank)) % X.p**X.divisors[r]
                 for r in range(X.rank))


def shift(p, level, coeffs, i):
    """``γ_i · Σ c_σ σ`` in the group ring, written from scratch."""
    basis = level_basis(p, level)
    index = {a: k for k, a in enumerate(basis)}
    out = [0] * len(basis)
    for a, c in zip(basis, coeffs):
        b = a[:i] + ((a[i] + 1) % p**level[i],) + a[i + 1:]
        out[index[b]] = c
    return out


def brute_homs(X):
    """Every equivariant map X -> (Z/p^t)[G/U], by enumerating generator images."""
    p, t = X.p, X.exponent
    m = p**t
    D = len(level_basis(p, X.level))
    candidates = [c for c in itertools.product(range(m), repeat=D)]
    per_gen = [[c for c in candidates if all((v * p**e) % m == 0 for v in c)]
               for e in X.divisors]
    found = []
    for images in itertools.product(*per_gen):
        ok = True
        for i in range(X.d):
            for j in range(X.rank):
                moved = act(X, i, X.basis_element(j))
                lhs = [sum(moved[k] * images[k][s] for k in range(X.rank)) % m for s in range(D)]
                if lhs != [v % m for v in shift(p, X.level, images[j], i)]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(images)
    return found


@pytest.mark.parametrize("name,p,level", TINY)
def test_hom_space_matches_enumeration(name, p, level):
    X = coinvariants(catalog_module(name, p), level)
    truth = {tuple(map(tuple, imgs)) for imgs in brute_homs(X)}
    H = hom_to_gpring(X)
    solved = {f.images for f in H.elements()}
    assert solved == truth
    assert len(truth) == X.group_order


@pytest.mark.parametrize("name,p,level", TINY)
def test_eta_is_a_bijection_onto_characters(name, p, level):
    X = coinvariants(catalog_module(name, p), level)
    H = hom_to_gpring(X)
    t = X.exponent
    chars = set()
    for f in H.elements():
        phi = eta(f)
        for x in X.elements():
            assert phi(x) == f(x).identity_coefficient()
        chars.add(phi.values)
    all_chars = {Character.from_dual_coords(X, c).values
                 for c in itertools.product(*(range(p**e) for e in X.divisors))}
    assert chars == all_chars


@pytest.mark.parametrize("name,p,level", TINY)
def test_eta_inverse_reconstructs_every_hom(name, p, level):
    X = coinvariants(catalog_module(name, p), level)
    H = hom_to_gpring(X)
    for f in H.elements():
        back = eta_inverse(eta(f))
        assert back.images == f.images
        assert back.is_valid()


def test_eta_inverse_formula_on_elements():
    X = coinvariants(catalog_module("lambda-mod-T-minus-p", 3), (1,))
    phi = Character.from_dual_coords(X, (4,))
    f = eta_inverse(phi)
    basis = level_basis(3, (1,))
    for x in X.elements():
        fx = f(x).coeffs
        for s, (a,) in enumerate(basis):
            y = x
            for _ in range((-a) % 3):
                y = act(X, 0, y)
            assert fx[s] == phi(y)


@pytest.mark.parametrize("name,p,bound", [
    ("lambda-mod-p", 2, 2), ("lambda-mod-p", 3, 2), ("lambda-mod-p2", 2, 2),
    ("lambda-mod-T-minus-p", 5, 2), ("lambda-mod-p-T-minus-p", 3, 1),
    ("lambda-mod-p-T", 3, 2), ("zero-module", 2, 2),
])
def test_duality_check_passes(name, p, bound):
    M = catalog_module(name, p)
    for n in range(bound + 1):
        r = duality_check(M, (n,))
        assert r.passed, r
        assert r.hom_divisors == coinvariants(M, (n,)).divisors


def test_duality_check_d2():
    M = catalog_module("d2-mod-p-T1", 3)
    for level in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        assert duality_check(M, level).passed


@pytest.mark.parametrize("name,p", [("lambda-mod-p", 2), ("lambda-mod-p-T-minus-p", 3),
                                    ("lambda-mod-T-minus-p", 2), ("lambda-mod-p-T", 2)])
def test_naturality_exhaustive_small(name, p):
    M = catalog_module(name, p)
    r = verify_eta_natural(M, (0,), (1,))
    assert r.passed and r.homs_exhaustive and r.elements_exhaustive


def test_naturality_d2():
    M = catalog_module("d2-mod-p-T1", 2)
    for a, b in [((0, 0), (1, 1)), ((0, 0), (0, 1)), ((1, 0), (1, 1))]:
        assert verify_eta_natural(M, a, b).passed


def test_rho_identity_and_equivariance():
    M = catalog_module("lambda-mod-p-T-minus-p", 3)
    X2 = coinvariants(M, (1,))
    H2 = hom_to_gpring(X2)
    for h in H2.generators:
        assert rho(h, (1,)) is h
        low = rho(h, (0,))
        assert low.is_valid()


def test_naturality_reports_a_witness_when_broken(monkeypatch):
    import iwalab.homalg as hm
    real = hm.norm_morphism

    def doubled(M, n, n2, precision=None):
        N = real(M, n, n2, precision)
        return FiniteMorphism(N.source, N.target,
                              tuple(tuple(2 * v for v in row) for row in N.matrix))

    monkeypatch.setattr(hm, "norm_morphism", doubled)
    r = verify_eta_natural(catalog_module("lambda-mod-T-minus-p", 3), (0,), (1,))
    assert not r.passed
    assert set(r.witness) == {"hom", "element", "lhs", "rhs"}
    assert r.witness["lhs"] != r.witness["rhs"]


def test_sampling_is_seeded():
    M = catalog_module("lambda-mod-p", 3)
    a = verify_eta_natural(M, (1,), (2,), seed=5)
    b = verify_eta_natural(M, (1,), (2,), seed=5)
    assert a == b and a.passed and not a.homs_exhaustive
