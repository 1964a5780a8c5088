import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from jumpstat.coupling import CouplingSet, Geometry, build_coupling_set
from jumpstat.errors import ConfigurationError, InvariantViolationError
from jumpstat.liouville import (Tag, build_full, build_hcond, build_incoherent, build_reset,
                                read_triplets, restrict_to_subspace, split_generator, unvec, vec,
                                write_triplets)
from jumpstat.model import (EnsembleSpec, basis_matrix, build_symmetrized_basis, d_system, four_level,
                            intensity_subspaces, product_index)


def ket_bra(dim, i, j):
    m = np.zeros((dim, dim), dtype=complex)
    m[i, j] = 1
    return m


def random_hermitian(rng, d):
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (x + x.conj().T) / 2


def couplings(spec):
    return build_coupling_set(spec.geometry, spec.scheme) if spec.n_atoms > 1 else CouplingSet.empty()


def all_specs(d_scheme, four_scheme, r=0.5):
    for s in (d_scheme, four_scheme):
        for n in (1, 2, 3):
            yield EnsembleSpec(s, n, Geometry.equilateral(r, n) if n > 1 else None)


def test_vec_convention():
    rng = np.random.default_rng(1)
    a, b, rho = (rng.normal(size=(3, 3)) for _ in range(3))
    assert np.allclose(vec(a @ rho @ b), np.kron(b.T, a) @ vec(rho))
    assert np.allclose(unvec(vec(rho), 3), rho)


def test_hcond_single_d():
    spec = EnsembleSpec(d_system(0.0, 0.0, 1.0), 1)
    h = build_hcond(spec, CouplingSet.empty())
    want = ket_bra(3, 2, 2) / 2j + 0.5 * (ket_bra(3, 0, 2) + ket_bra(3, 2, 0))
    assert np.allclose(h, want, atol=1e-15)


def test_hcond_factorizes_without_coupling(four_scheme):
    single = build_hcond(EnsembleSpec(four_scheme, 1), CouplingSet.empty())
    pair = build_hcond(EnsembleSpec(four_scheme, 2), CouplingSet.empty())
    eye = np.eye(4)
    assert np.allclose(pair, np.kron(single, eye) + np.kron(eye, single), atol=1e-15)


def test_hcond_damping_part_nonpositive(d_scheme, four_scheme):
    for spec in all_specs(d_scheme, four_scheme, r=0.2):
        h = build_hcond(spec, couplings(spec))
        anti = (h - h.conj().T) / 2j
        assert np.linalg.eigvalsh(anti).max() <= 1e-12


def test_reset_single_d():
    spec = EnsembleSpec(d_system(0.01, 0.02, 1.0), 1)
    r = build_reset(spec, CouplingSet.empty()).apply(ket_bra(3, 2, 2))
    assert np.allclose(r, 0.02 * ket_bra(3, 1, 1) + 1.0 * ket_bra(3, 0, 0))


def test_reset_of_ground_is_zero(four_scheme):
    spec = EnsembleSpec(four_scheme, 3, Geometry.equilateral(0.5))
    rho = ket_bra(64, 0, 0)
    assert np.abs(build_reset(spec, couplings(spec)).apply(rho)).max() == 0


def test_reset_two_d_dicke_weights(d_scheme):
    spec = EnsembleSpec(d_scheme, 2, Geometry.equilateral(0.3, 2))
    cs = couplings(spec)
    e3 = product_index((3, 3), 3)
    out = build_reset(spec, cs).apply(ket_bra(9, e3, e3))
    basis = build_symmetrized_basis(spec)
    U = basis_matrix(basis, 9)
    pops = dict(zip([b.name for b in basis], np.real(np.diag(U.conj().T @ out @ U))))
    a2, a3 = d_scheme.einstein[2], d_scheme.einstein[3]
    c2, c3 = cs.get(0, 1, 2).real, cs.get(0, 1, 3).real
    assert pops["s23"] == pytest.approx(a2 + c2)
    assert pops["a23"] == pytest.approx(a2 - c2)
    assert pops["s13"] == pytest.approx(a3 + c3)
    assert pops["a13"] == pytest.approx(a3 - c3)


def test_incoherent(four_scheme, d_scheme):
    spec = EnsembleSpec(four_scheme, 1)
    out = build_incoherent(spec).apply(ket_bra(4, 0, 0))
    assert out[3, 3] == pytest.approx(four_scheme.incoherent_w)
    assert out.trace() == pytest.approx(0)
    w0 = EnsembleSpec(four_level(1e-3, 0.3, 1.2, 0.0, 1.0), 2)
    assert build_incoherent(w0).matrix.nnz == 0
    with pytest.raises(ConfigurationError):
        build_incoherent(EnsembleSpec(d_scheme, 1))


def test_trace_preservation_random_states(d_scheme, four_scheme, rng):
    for spec in all_specs(d_scheme, four_scheme):
        full = build_full(spec, couplings(spec))
        for _ in range(50):
            rho = random_hermitian(rng, spec.dim)
            assert abs(np.trace(full.apply(rho))) < 1e-10


def test_hermiticity_preservation(d_scheme, four_scheme, rng):
    for spec in all_specs(d_scheme, four_scheme):
        full = build_full(spec, couplings(spec))
        x = rng.normal(size=(spec.dim, spec.dim)) + 1j * rng.normal(size=(spec.dim, spec.dim))
        assert np.allclose(full.apply(x.conj().T), full.apply(x).conj().T, atol=1e-12)


def test_split_sums_to_full(d_scheme, four_scheme):
    for spec in all_specs(d_scheme, four_scheme):
        cs = couplings(spec)
        l0, l1 = split_generator(spec, cs)
        diff = (l0.matrix + l1.matrix - build_full(spec, cs).matrix)
        assert diff.nnz == 0 or np.abs(diff.data).max() < 1e-12
        assert (l0.tag, l1.tag) == (Tag.L0, Tag.L1)


def test_l1_on_single_d_steady_state():
    a1, a2, rabi = 1e-3, 2e-3, 0.7
    spec = EnsembleSpec(d_system(a1, a2, rabi), 1)
    _, l1 = split_generator(spec, CouplingSet.empty())
    den = 1 + 2 * rabi ** 2
    rho = np.zeros((3, 3), dtype=complex)
    rho[0, 0], rho[2, 2] = (1 + rabi ** 2) / den, rabi ** 2 / den
    rho[0, 2], rho[2, 0] = 1j * rabi / den, -1j * rabi / den
    out = l1.apply(rho)
    p = a2 * rabi ** 2 / den
    assert out[2, 2] == pytest.approx(-p)
    assert out[1, 1] == pytest.approx(p)
    assert out[0, 0] == pytest.approx(0)
    assert out[0, 2] == pytest.approx(-a2 / 2 * rho[0, 2])


def test_four_level_l1_vanishes_without_weak_rates():
    spec = EnsembleSpec(four_level(0.0, 0.3, 1.2, 0.0, 1.0, wavelengths={1: 3.574, 2: 1.2454, 4: 0.9229}),
                        3, Geometry.equilateral(0.5))
    _, l1 = split_generator(spec, couplings(spec))
    assert l1.matrix.nnz == 0


def test_restrict_to_subspace_dimensions(four_scheme):
    spec = EnsembleSpec(d_system(1e-3, 1e-3, 1.0), 1)
    l0, _ = split_generator(spec, CouplingSet.empty())
    assert restrict_to_subspace(l0, [0, 2]).matrix.shape == (4, 4)
    spec3 = EnsembleSpec(four_scheme, 3, Geometry.equilateral(0.5))
    l0, _ = split_generator(spec3, couplings(spec3))
    core = intensity_subspaces(spec3)[3].sectors[0]
    assert len(core) == 8
    assert restrict_to_subspace(l0, core).matrix.shape == (64, 64)


def test_restrict_full_leaks():
    spec = EnsembleSpec(d_system(1e-3, 1e-3, 1.0), 1)
    full = build_full(spec, CouplingSet.empty())
    with pytest.raises(InvariantViolationError):
        restrict_to_subspace(full, [0, 2])


def test_minkowski_spectrum_two_atoms(four_scheme):
    single = split_generator(EnsembleSpec(four_scheme, 1), CouplingSet.empty()).L0.dense()
    pair = split_generator(EnsembleSpec(four_scheme, 2), CouplingSet.empty()).L0.dense()
    ev1 = np.linalg.eigvals(single)
    want = np.sort_complex((ev1[:, None] + ev1[None, :]).ravel())
    got = np.sort_complex(np.linalg.eigvals(pair))
    # match as multisets
    used = np.zeros(got.size, dtype=bool)
    for w in want:
        k = np.argmin(np.where(used, np.inf, np.abs(got - w)))
        assert abs(got[k] - w) < 1e-8
        used[k] = True


def test_triplet_round_trip(tmp_path, four_scheme):
    spec = EnsembleSpec(four_scheme, 2, Geometry.equilateral(0.5, 2))
    full = build_full(spec, couplings(spec))
    path = tmp_path / "full.txt"
    write_triplets(full, path)
    back = read_triplets(path)
    assert back.dim == full.dim and back.tag is Tag.FULL
    assert (back.matrix - full.matrix).nnz == 0 or np.abs((back.matrix - full.matrix).data).max() == 0
    assert path.read_text().startswith("# superoperator Full dim=16 vec=column-stacked")


@given(rabi=st.floats(0.05, 5.0), det=st.floats(-2.0, 2.0), w=st.floats(0.0, 0.5),
       r=st.floats(0.05, 5.0), seed=st.integers(0, 2 ** 31))
@settings(max_examples=25, deadline=None)
def test_trace_preservation_property(rabi, det, w, r, seed):
    scheme = four_level(1e-2, 0.3, 1.2, w, rabi, detuning=det, wavelengths={1: 3.574, 2: 1.2454, 4: 0.9229})
    spec = EnsembleSpec(scheme, 2, Geometry.equilateral(r, 2))
    full = build_full(spec, couplings(spec))
    row = sp.csr_matrix(np.eye(16).reshape(1, -1, order="F")) @ full.matrix
    assert np.abs(row.toarray()).max() < 1e-12
    rho = random_hermitian(np.random.default_rng(seed), 16)
    assert abs(np.trace(full.apply(rho))) < 1e-10
