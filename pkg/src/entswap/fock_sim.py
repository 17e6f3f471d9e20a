"""Exact small-Hilbert-space checks of the up-conversion heralding story.

Two state spaces live here:

* a truncated tri-mode Fock space (modes a, b and the sum-frequency mode c)
  evolved exactly under the generator a b c+ + a+ b+ c, used to verify the
  leading-order herald amplitude and the down-conversion counterexample;
* a four-photon time-bin space (photons 1..4, bins e/l) in which the
  heralding measurement on photons 2 and 3 is applied as a projection,
  used to verify the swapped Bell states for one and two nonlinear elements.

Basis labels are single whitespace-free tokens so states can be dumped as
``label re im`` lines, byte-comparable across runs: tri-mode kets are
``"na,nb,nc"`` in lexicographic order, four-photon kets are strings like
``"eell"`` (photons 1..4, e before l), and the up-converted photon modes are
``e_S1, l_S1, e_S2, l_S2`` for the first and second nonlinear element.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import DomainError, EntswapError, InputError, TruncationError

_SQRT_HALF = 2.0**-0.5

TWO_PHOTON_BASIS: tuple[str, ...] = ("ee", "el", "le", "ll")
TIME_BIN_BASIS: tuple[str, ...] = tuple(
    "".join(bins) for bins in product("el", repeat=4)
)
SIGMA_MODES: tuple[str, ...] = ("e_S1", "l_S1", "e_S2", "l_S2")
BELL_LABELS: tuple[str, ...] = ("phi+", "phi-", "psi+", "psi-")

# Which up-converted mode the bins of photons 2 and 3 feed: the first element
# interacts equal bins, the second interacts opposite bins.
_SIGMA_OF_BINS = {"ee": "e_S1", "ll": "l_S1", "el": "e_S2", "le": "l_S2"}


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over an ordered, uniquely labeled basis."""

    amplitudes: np.ndarray
    basis: tuple[str, ...]

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or len(amps) != len(self.basis):
            raise InputError(
                f"amplitude vector of length {amps.shape} does not match basis of "
                f"size {len(self.basis)}"
            )
        if len(set(self.basis)) != len(self.basis):
            raise InputError("basis labels must be unique")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, label: str) -> complex:
        try:
            return complex(self.amplitudes[self.basis.index(label)])
        except ValueError:
            raise InputError(f"label {label!r} is not in this basis") from None

    def dump(self) -> str:
        """One line per ket, ``label re im``, in basis order."""
        lines = [
            f"{label} {amp.real:.17e} {amp.imag:.17e}"
            for label, amp in zip(self.basis, self.amplitudes)
        ]
        return "\n".join(lines)


@dataclass(frozen=True)
class BellOutcome:
    """One resolvable herald outcome of the swapping measurement.

    ``label`` names the Bell state of photons 1 and 4 the conditioned state
    matches best, ``projector`` the measured superposition of up-converted
    modes, ``probability`` the unconditional outcome probability, and
    ``conditioned_state`` the renormalized two-photon state (None when the
    outcome has zero probability).
    """

    label: str
    projector: str
    probability: float
    conditioned_state: StateVector | None


def tri_mode_basis(cutoff: int) -> tuple[str, ...]:
    """All occupation labels "na,nb,nc" with each mode in 0..cutoff, lexicographic."""
    if cutoff < 0:
        raise DomainError(f"cutoff must be >= 0, got {cutoff}")
    return tuple(
        f"{na},{nb},{nc}"
        for na, nb, nc in product(range(cutoff + 1), repeat=3)
    )


def tri_mode_state(n_a: int, n_b: int, n_c: int, cutoff: int) -> StateVector:
    """Fock basis state |n_a, n_b, n_c> in the truncated tri-mode space."""
    basis = tri_mode_basis(cutoff)
    label = f"{n_a},{n_b},{n_c}"
    if min(n_a, n_b, n_c) < 0 or max(n_a, n_b, n_c) > cutoff:
        raise DomainError(f"occupations {label} outside 0..{cutoff}")
    amps = np.zeros(len(basis), dtype=complex)
    amps[basis.index(label)] = 1.0
    return StateVector(amps, basis)


@lru_cache(maxsize=8)
def _sfg_eigensystem(cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of the real symmetric generator a b c+ + a+ b+ c."""
    dim = (cutoff + 1) ** 3
    gen = np.zeros((dim, dim))
    stride_a = (cutoff + 1) ** 2
    stride_b = cutoff + 1
    for na, nb, nc in product(range(cutoff + 1), repeat=3):
        if na >= 1 and nb >= 1 and nc < cutoff:
            src = na * stride_a + nb * stride_b + nc
            dst = (na - 1) * stride_a + (nb - 1) * stride_b + (nc + 1)
            coeff = (na * nb * (nc + 1)) ** 0.5
            gen[dst, src] = coeff
            gen[src, dst] = coeff
    w, v = np.linalg.eigh(gen)
    w.flags.writeable = False
    v.flags.writeable = False
    return w, v


def _check_closure(state: StateVector, cutoff: int) -> None:
    # The generator conserves n_a - n_b and n_a + n_c, so each basis ket only
    # couples to a finite chain; the chain stays inside the truncation iff
    # n_a + n_c and n_b + n_c do.
    for label, amp in zip(state.basis, state.amplitudes):
        if amp == 0.0:
            continue
        na, nb, nc = (int(x) for x in label.split(","))
        if na + nc > cutoff or nb + nc > cutoff:
            raise TruncationError(
                f"ket {label} couples to occupations above the cutoff {cutoff}; "
                "increase the cutoff"
            )


def sfg_evolve(state: StateVector, gt: float, cutoff: int) -> StateVector:
    """Evolve a tri-mode state exactly under exp(-i gt (a b c+ + a+ b+ c)).

    The generator block-diagonalizes over conserved (n_a - n_b, n_a + n_c),
    so once the closure check passes the truncated evolution is exact; the
    unitary is built from the eigendecomposition of the real symmetric
    generator.
    """
    if gt < 0.0:
        raise DomainError(f"gt must be >= 0, got {gt}")
    basis = tri_mode_basis(cutoff)
    if state.basis != basis:
        raise InputError(
            f"state basis does not match the tri-mode basis for cutoff {cutoff}"
        )
    _check_closure(state, cutoff)
    if gt == 0.0:
        return state
    w, v = _sfg_eigensystem(cutoff)
    phases = np.exp(-1j * gt * w)
    new_amps = v @ (phases * (v.T @ state.amplitudes))
    before, after = state.norm(), float(np.linalg.norm(new_amps))
    if abs(after - before) > 1e-9 * max(before, 1.0):
        raise EntswapError("unitarity lost during evolution; generator is inconsistent")
    return StateVector(new_amps, basis)


def herald_amplitude(n_a: int, n_b: int, gt: float, cutoff: int | None = None) -> complex:
    """Amplitude on |n_a-1, n_b-1, 1> after evolving |n_a, n_b, 0>.

    To leading order this is -i sqrt(p_sfg n_a n_b) with p_sfg = (gt)^2.
    """
    if n_a < 1 or n_b < 1:
        raise DomainError("need at least one photon in each input mode")
    if cutoff is None:
        cutoff = max(n_a, n_b) + 1
    evolved = sfg_evolve(tri_mode_state(n_a, n_b, 0, cutoff), gt, cutoff)
    return evolved.amplitude(f"{n_a - 1},{n_b - 1},1")


def dfg_spurious_amplitude(gt: float) -> tuple[complex, complex]:
    """Compare reverse-direction (difference-frequency) conversion with the
    spontaneous splitting of a bare sum-frequency photon.

    Returns (dfg_amp, spdc_amp): the amplitude for |1,0,1> -> |2,1,0>, the
    intended down-conversion stimulated by the spectator a photon, and the
    amplitude for |0,0,1> -> |1,1,0>, the spontaneous pair that fires the
    herald with no input photon at all.  Both are first order in gt, which is
    why this direction cannot herald faithfully.
    """
    cutoff = 2
    dfg = sfg_evolve(tri_mode_state(1, 0, 1, cutoff), gt, cutoff).amplitude("2,1,0")
    spdc = sfg_evolve(tri_mode_state(0, 0, 1, cutoff), gt, cutoff).amplitude("1,1,0")
    return dfg, spdc


def bell_state(label: str) -> StateVector:
    """Two-photon time-bin Bell state on the basis ('ee', 'el', 'le', 'll')."""
    if label not in BELL_LABELS:
        raise InputError(f"unknown Bell label {label!r}; expected one of {BELL_LABELS}")
    amps = np.zeros(4, dtype=complex)
    sign = 1.0 if label.endswith("+") else -1.0
    if label.startswith("phi"):
        amps[0], amps[3] = _SQRT_HALF, sign * _SQRT_HALF
    else:
        amps[1], amps[2] = _SQRT_HALF, sign * _SQRT_HALF
    return StateVector(amps, TWO_PHOTON_BASIS)


def product_state(pair_12: StateVector, pair_34: StateVector) -> StateVector:
    """Four-photon state from two independent photon pairs."""
    for pair in (pair_12, pair_34):
        if pair.basis != TWO_PHOTON_BASIS:
            raise InputError("pair states must live on the two-photon time-bin basis")
    amps = np.kron(pair_12.amplitudes, pair_34.amplitudes)
    return StateVector(amps, TIME_BIN_BASIS)


def sfg_projection_vectors() -> dict[str, np.ndarray]:
    """Measurement vectors (e_Sx +/- l_Sx)/sqrt(2) on the mode order SIGMA_MODES."""
    vecs: dict[str, np.ndarray] = {}
    for element, (e_idx, l_idx) in (("S1", (0, 1)), ("S2", (2, 3))):
        for sign_label, sign in (("+", 1.0), ("-", -1.0)):
            vec = np.zeros(4, dtype=complex)
            vec[e_idx] = _SQRT_HALF
            vec[l_idx] = sign * _SQRT_HALF
            vecs[element + sign_label] = vec
    return vecs


def _heralded_amplitudes(state: StateVector, elements: str) -> np.ndarray:
    """Map four-photon amplitudes to the (sigma mode, photon 1, photon 4) tensor.

    Photons 2 and 3 are consumed by the nonlinear element(s); bin patterns a
    single element cannot convert are dropped from the heralded subspace.
    """
    keep = SIGMA_MODES[:2] if elements == "one" else SIGMA_MODES
    herald = np.zeros((4, 2, 2), dtype=complex)
    bin_index = {"e": 0, "l": 1}
    for label, amp in zip(state.basis, state.amplitudes):
        sigma = _SIGMA_OF_BINS[label[1:3]]
        if sigma not in keep:
            continue
        herald[SIGMA_MODES.index(sigma), bin_index[label[0]], bin_index[label[3]]] += amp
    return herald


def swap_condition_on_sfg(state: StateVector, elements: str = "one") -> list[BellOutcome]:
    """Herald outcomes of the swapping measurement on photons 2 and 3.

    ``elements`` selects one nonlinear element (equal-bin interaction only,
    two resolvable outcomes) or two (all four Bell states resolvable).  The
    input must be a normalized product of a photon-(1,2) pair state and a
    photon-(3,4) pair state; outcome probabilities sum to the weight of the
    heralded subspace.
    """
    if elements not in ("one", "two"):
        raise InputError(f"elements must be 'one' or 'two', got {elements!r}")
    if state.basis != TIME_BIN_BASIS:
        raise InputError("input must live on the four-photon time-bin basis")
    if abs(state.norm() - 1.0) > 1e-9:
        raise InputError("input state must be normalized")
    pair_matrix = state.amplitudes.reshape(4, 4)
    singular_values = np.linalg.svd(pair_matrix, compute_uv=False)
    if singular_values[1] > 1e-10:
        raise InputError("input is not a product of photon-(1,2) and photon-(3,4) states")

    herald = _heralded_amplitudes(state, elements)
    projectors = sfg_projection_vectors()
    wanted = ("S1+", "S1-") if elements == "one" else ("S1+", "S1-", "S2+", "S2-")
    outcomes = []
    for name in wanted:
        vec = projectors[name]
        component = np.tensordot(vec.conj(), herald, axes=(0, 0)).reshape(4)
        probability = float(np.vdot(component, component).real)
        if probability > 0.0:
            conditioned = StateVector(component / probability**0.5, TWO_PHOTON_BASIS)
            label = max(BELL_LABELS, key=lambda b: bell_fidelity(conditioned, b))
        else:
            conditioned = None
            label = "phi+" if name.endswith("+") else "phi-"
        outcomes.append(
            BellOutcome(
                label=label,
                projector=name,
                probability=probability,
                conditioned_state=conditioned,
            )
        )
    return outcomes


def bell_fidelity(state: StateVector, target: str) -> float:
    """Squared overlap of a two-photon state with a Bell state."""
    if state.basis != TWO_PHOTON_BASIS:
        raise InputError("state must live on the two-photon time-bin basis")
    overlap = np.vdot(bell_state(target).amplitudes, state.amplitudes)
    return float(abs(overlap) ** 2)
