import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qprefix.core import QOperator, QVector, all_strings, density_from_vector, identity_operator
from qprefix.errors import CapacityError, GuardError, PreconditionError
from qprefix.oracle import oracle_restrict, oracle_tensor_at
from qprefix.sampling import (
    random_density,
    random_hermitian,
    random_index_set,
    random_length_eigenstate,
    random_vector,
)
from qprefix.tape import (
    IndexSet,
    TapeState,
    concat,
    embed,
    extract,
    is_bitstring_configuration,
    normalization_report,
    prefix,
    restrict,
    tensor,
    tensor_at,
)

from helpers import R, bitstrings, rng_for, seeds

CELLS = 5


class TestIndexSet:
    def test_interval(self):
        assert IndexSet.interval(2, 4).cells(10) == [2, 3, 4]
        assert IndexSet.interval(3, 2).cells(10) == []
        with pytest.raises(ValueError):
            IndexSet.interval(3, 1)

    def test_complement(self):
        i = IndexSet.of(1, 3)
        assert i.complement().cells(5) == [2, 4, 5]
        assert i.complement().complement() == i
        assert 7 in i.complement() and 3 not in i.complement()

    def test_tail(self):
        t = IndexSet.tail(3)
        assert not t.is_finite
        assert t.cells(5) == [3, 4, 5]
        assert t.complement() == IndexSet.interval(1, 2)

    def test_capacity(self):
        assert IndexSet.of(2, 5).cells_needed(2) == 5
        assert IndexSet.tail(3).cells_needed(2) == 4
        with pytest.raises(CapacityError):
            IndexSet.of(2).cells_needed(2)

    def test_str(self):
        assert str(IndexSet.interval(2, 4)) == "[2,4]"
        assert str(IndexSet.of(1, 3)) == "{1,3}"
        assert str(IndexSet.tail(3)) == "[3,inf)"


class TestEmbedding:
    def test_bits_then_blanks(self):
        v = QVector({"00": R, "1111": -R})
        state = embed(v, IndexSet.naturals(), 6)
        assert set(state.terms) == {"00####", "1111##"}

    def test_scattered_cells(self):
        state = embed(QVector.ket("1"), IndexSet.of(2), 2)
        assert set(state.terms) == {"#1"}

    def test_bitstring_configuration(self):
        assert is_bitstring_configuration("01##")
        assert not is_bitstring_configuration("0#1#")

    @given(seeds(), st.integers(0, 3))
    def test_round_trip_on_naturals(self, seed, n):
        v = random_vector(rng_for(seed), 3, 3)
        assert extract(embed(v, IndexSet.naturals(), 4), IndexSet.naturals()) == v


class TestRestrictExamples:
    def test_prefix_worked_example(self):
        rho = density_from_vector(QVector({"1": R, "110": R}))
        expected = QOperator({("1", "1"): 0.5, ("11", "11"): 0.5})
        assert prefix(rho, 2).isclose(expected, 1e-12)

    def test_cut_superposition(self):
        rho = density_from_vector(QVector({"00": R, "1111": -R}))
        expected = QOperator({("00", "00"): 0.5, ("111", "111"): 0.5})
        assert restrict(rho, IndexSet.interval(1, 3)).isclose(expected, 1e-12)

    def test_full_restriction_is_identity(self):
        rho = random_density(rng_for(1), 3, 3, rank=2)
        assert restrict(rho, IndexSet.naturals()).isclose(rho, 1e-12)

    def test_empty_index_gives_empty_string(self):
        rho = random_density(rng_for(2), 3, 3)
        assert restrict(rho, IndexSet.interval(1, 0)).isclose(QOperator.projector(""), 1e-12)

    def test_vector_input_is_promoted(self):
        v = QVector({"1": R, "110": R})
        assert prefix(v, 2) == prefix(density_from_vector(v), 2)

    def test_interior_cells_drop_non_bitstrings(self):
        # reading cell 2 of |1> sees a blank, which reads back as the empty string
        rho = QOperator.projector("1")
        assert restrict(rho, IndexSet.of(2)) == QOperator.projector("")


class TestOracleEquivalence:
    @settings(max_examples=100, deadline=None)
    @given(seeds())
    def test_restrict_matches_dense(self, seed):
        rng = rng_for(seed)
        rho = random_density(rng, 3, 3, rank=2)
        index = random_index_set(rng, CELLS)
        assert restrict(rho, index).distance(oracle_restrict(rho, index, CELLS)) < 1e-12

    @settings(max_examples=50, deadline=None)
    @given(seeds())
    def test_tensor_at_matches_dense(self, seed):
        rng = rng_for(seed)
        index = random_index_set(rng, 4)
        k = index.count(4)
        a = random_density(rng, k, 2)
        b = random_density(rng, 4 - k, 2)
        got = tensor_at(a, index, b, cell_count=4)
        assert got.distance(oracle_tensor_at(a, index, b, 4)) < 1e-12

    def test_guard(self):
        with pytest.raises(GuardError):
            oracle_restrict(QOperator.projector("0"), IndexSet.of(1), 9)

    @given(seeds(), st.integers(3, 6))
    def test_truncation_independence(self, seed, extra):
        # cells beyond the longest string never change the restriction
        rng = rng_for(seed)
        rho = random_density(rng, 3, 3)
        index = random_index_set(rng, 3)
        a = oracle_restrict(rho, index, 3)
        b = oracle_restrict(rho, index, extra)
        assert a.distance(b) < 1e-12


class TestRestrictInvariants:
    @settings(max_examples=100)
    @given(seeds())
    def test_trace_preserved_and_positive(self, seed):
        rng = rng_for(seed)
        rho = random_density(rng, 4, 4, rank=3)
        index = random_index_set(rng, 6)
        out = restrict(rho, index)
        assert out.trace == pytest.approx(1, abs=1e-9)
        assert out.is_density(1e-9)

    @settings(max_examples=200, deadline=None)
    @given(seeds())
    def test_duality(self, seed):
        rng = rng_for(seed)
        rho = random_density(rng, 3, 3, rank=2)
        index = random_index_set(rng, CELLS)
        size = index.count(CELLS)
        a = random_hermitian(rng, size)
        lhs = (restrict(rho, index) @ a).trace
        rhs = (rho @ tensor_at(a, index, identity_operator(CELLS - size), cell_count=CELLS)).trace
        assert abs(lhs - rhs) < 1e-9

    @given(seeds(), st.integers(0, 4), st.integers(0, 4))
    def test_prefix_of_prefix(self, seed, m, n):
        rho = random_density(rng_for(seed), 4, 3)
        assert prefix(prefix(rho, n), m).isclose(prefix(rho, min(m, n)), 1e-12)

    @given(seeds())
    def test_recovery_of_length_eigenstate_prefix(self, seed):
        # a length-n eigenstate tensored with anything gives it back as the n-prefix
        rng = rng_for(seed)
        n = int(rng.integers(0, 3))
        rho = density_from_vector(random_length_eigenstate(rng, n, 2))
        sigma = random_density(rng, 2, 2)
        assert prefix(tensor(rho, sigma), n).isclose(rho, 1e-12)


class TestTensorProducts:
    def test_norm_loss(self):
        a = QVector({"": 0.6, "0": 0.8})
        out = tensor_at(a, IndexSet.of(1), QVector.ket("1"))
        assert out.isclose(QVector({"01": 0.8}), 1e-12)
        assert out.norm == pytest.approx(0.8)

    def test_vanishing(self):
        out = tensor_at(QVector.ket("11"), IndexSet.interval(3, 4), QVector.ket("0"))
        assert not out

    def test_report(self):
        a = QVector({"": 0.6, "0": 0.8})
        b = QVector.ket("1")
        rep = normalization_report([a, b], tensor_at(a, IndexSet.of(1), b))
        assert rep.output_norm == pytest.approx(0.8)
        assert rep.lost_weight == pytest.approx(0.36)

    def test_tensor_requires_length_eigenstate(self):
        with pytest.raises(PreconditionError):
            tensor(QVector({"": R, "0": R}), QVector.ket("1"))

    @settings(max_examples=100)
    @given(bitstrings(4), bitstrings(4))
    def test_classical_tensor_is_concatenation(self, s, t):
        assert tensor(QVector.ket(s), QVector.ket(t)) == QVector.ket(s + t)

    def test_mixed_kinds_rejected(self):
        with pytest.raises(TypeError):
            tensor_at(QVector.ket("0"), IndexSet.of(1), QOperator.projector("1"))

    @given(seeds())
    def test_vector_and_operator_forms_agree(self, seed):
        rng = rng_for(seed)
        index = random_index_set(rng, 4)
        k = index.count(4)
        a = random_vector(rng, k, 2)
        b = random_vector(rng, 4 - k, 2)
        v = tensor_at(a, index, b, cell_count=4)
        op = tensor_at(QOperator.outer(a, a), index, QOperator.outer(b, b), cell_count=4)
        assert op.isclose(QOperator.outer(v, v), 1e-12)


class TestConcat:
    def test_example(self):
        v = QVector({"0": R, "00": R})
        w = QVector({"0": R, "00": -R})
        assert concat(v, w).isclose(QVector({"00": 0.5, "0000": -0.5}), 1e-12)

    def test_empty_is_unit(self):
        v = random_vector(rng_for(5), 3, 3)
        assert concat(v, QVector.ket("")) == v == concat(QVector.ket(""), v)

    @settings(max_examples=200)
    @given(seeds(), bitstrings(3))
    def test_classical_suffix_is_isometry(self, seed, s):
        v = random_vector(rng_for(seed), 4, 4)
        assert concat(v, QVector.ket(s)).norm == pytest.approx(v.norm, abs=1e-9)

    @given(seeds())
    def test_bilinear(self, seed):
        rng = rng_for(seed)
        u, v, w = (random_vector(rng, 3, 2) for _ in range(3))
        assert concat(u + 2 * v, w).isclose(concat(u, w) + 2 * concat(v, w), 1e-12)

    def test_not_an_isometry_in_general(self):
        # concatenation of two unit superpositions can shrink the norm
        v = QVector({"0": R, "00": R})
        w = QVector({"0": R, "00": -R})
        assert concat(v, w).norm == pytest.approx(R)

    def test_enumeration_oracle(self):
        v = random_vector(rng_for(8), 2, 3)
        w = random_vector(rng_for(9), 2, 3)
        brute = {}
        for a in all_strings(2):
            for b in all_strings(2):
                brute[a + b] = brute.get(a + b, 0) + v[a] * w[b]
        assert concat(v, w).isclose(QVector(brute), 1e-12)


class TestContractExamples:
    def test_empty_string_is_all_blanks(self):
        assert set(embed(QVector.ket(""), IndexSet.of(1, 2), 3).terms) == {"###"}

    def test_extract_drops_non_bitstring(self):
        state = TapeState(4, {"#1##": 1.0, "11##": 0.5})
        assert extract(state, IndexSet.interval(1, 4)) == QVector({"11": 0.5})
        assert extract(state, IndexSet.naturals()) == QVector({"11": 0.5})

    def test_prefix_of_empty(self):
        assert prefix(QOperator.projector(""), 5) == QOperator.projector("")

    def test_oracle_identity(self):
        rho = random_density(rng_for(4), 3, 3, rank=2)
        assert oracle_restrict(rho, IndexSet.interval(1, 4), 4).isclose(rho, 1e-12)

    def test_tensor_keeps_left_factor(self):
        rho = QOperator.projector("11")
        sigma = density_from_vector(QVector({"0": R, "10": R}))
        assert prefix(tensor(rho, sigma), 2).isclose(rho, 1e-12)


class TestTensorInvariants:
    @settings(max_examples=100)
    @given(seeds())
    def test_concat_matches_tensor_for_length_eigenstates(self, seed):
        rng = rng_for(seed)
        psi = random_length_eigenstate(rng, int(rng.integers(0, 3)), 2)
        phi = random_vector(rng, 3, 3)
        via_concat = density_from_vector(concat(psi, phi), allow_unnormalized=True)
        via_tensor = tensor(density_from_vector(psi), density_from_vector(phi))
        assert via_concat.isclose(via_tensor, 1e-9)

    @settings(max_examples=100)
    @given(seeds(), st.integers(0, 2))
    def test_recover_right_factor(self, seed, extra):
        rng = rng_for(seed)
        n = int(rng.integers(0, 3))
        rho = density_from_vector(random_length_eigenstate(rng, n, 2))
        sigma = random_density(rng, 2, 2)
        k = n + max(len(s) for s in sigma.support_strings()) + extra
        got = restrict(tensor(rho, sigma), IndexSet.interval(n + 1, k))
        assert got.isclose(sigma, 1e-9)

    @settings(max_examples=50, deadline=None)
    @given(seeds(), st.integers(0, 3))
    def test_truncation_independence(self, seed, extra):
        rng = rng_for(seed)
        index = random_index_set(rng, 4)
        k = index.count(4)
        a = random_density(rng, k, 2)
        b = random_density(rng, 4 - k, 2)
        assert tensor_at(a, index, b, cell_count=4).isclose(
            tensor_at(a, index, b, cell_count=4 + extra), 1e-12
        )
