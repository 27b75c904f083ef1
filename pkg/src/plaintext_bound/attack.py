"""Codebook plaintext recovery against a toy table cipher.

The cipher is a seeded random permutation of m-bit blocks; the attacker
holds D (ciphertext, plaintext) pairs and watches S ciphertexts of uniform
plaintexts. A trial succeeds when any watched ciphertext is in the book.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import ParameterError, ResourceError

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

MIN_BITS, MAX_BITS = 2, 24
DEFAULT_BUDGET = 1 << 28  # table entries summed over all trials


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def splitmix64(seed: int) -> int:
    """First output of a SplitMix64 generator seeded with ``seed``."""
    return _mix((seed + GAMMA) & MASK64)


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return _mix(self.state)

    def outputs(self, n: int) -> np.ndarray:
        """The next n outputs as a uint64 array."""
        steps = np.arange(1, n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            states = np.uint64(self.state) + steps * np.uint64(GAMMA)
            out = _mix_array(states)
        self.state = (self.state + n * GAMMA) & MASK64
        return out

    def below(self, bound: int) -> int:
        """Uniform int in [0, bound): reject draws at or above the last full multiple of bound."""
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            r = self.next()
            if r < limit:
                return r % bound

    def below_many(self, bounds: np.ndarray) -> np.ndarray:
        """Sequential ``below`` calls, one per bound, drawn in bulk when no draw is rejected."""
        bounds = np.asarray(bounds, dtype=np.uint64)
        saved = self.state
        r = self.outputs(len(bounds))
        rem = (np.uint64(MASK64) % bounds + np.uint64(1)) % bounds
        if np.all(r <= np.uint64(MASK64) - rem):
            return r % bounds
        self.state = saved
        return np.array([self.below(int(b)) for b in bounds], dtype=np.uint64)


class PermutationCipher:
    def __init__(self, m: int, seed: int, table: np.ndarray):
        self.m = m
        self.seed = seed
        self.table = table
        self.inverse = np.empty_like(table)
        self.inverse[table] = np.arange(len(table), dtype=table.dtype)

    @property
    def size(self) -> int:
        return 1 << self.m

    def encrypt(self, pt):
        return self.table[pt]

    def decrypt(self, ct):
        return self.inverse[ct]


def make_permutation(m: int, seed: int) -> PermutationCipher:
    """Fisher-Yates shuffle of range(2**m), from the top index down."""
    if not MIN_BITS <= m <= MAX_BITS:
        raise ParameterError(f"block size must be {MIN_BITS}..{MAX_BITS} bits, got {m}")
    n = 1 << m
    rng = SplitMix64(seed)
    tops = np.arange(n - 1, 0, -1, dtype=np.uint64)
    js = rng.below_many(tops + np.uint64(1)).tolist()
    table = list(range(n))
    for i, j in zip(range(n - 1, 0, -1), js):
        table[i], table[j] = table[j], table[i]
    return PermutationCipher(m, seed, np.array(table, dtype=np.uint32))


@dataclass
class Codebook:
    m: int
    seed: int
    entries: dict[int, int]  # ciphertext -> plaintext

    @property
    def D(self) -> int:
        return len(self.entries)

    def lookup(self, ct: int) -> int | None:
        return self.entries.get(ct)

    def dumps(self) -> str:
        width = (self.m + 3) // 4
        lines = [f"m={self.m} seed={self.seed} D={self.D}"]
        lines += [f"{ct:0{width}x},{pt:0{width}x}" for ct, pt in sorted(self.entries.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Codebook":
        header, *rows = text.split("\n")
        try:
            fields = dict(part.split("=", 1) for part in header.split())
            m, seed, D = int(fields["m"]), int(fields["seed"]), int(fields["D"])
        except (KeyError, ValueError) as exc:
            raise ParameterError(f"bad codebook header {header!r}") from exc
        entries = {}
        for row in rows:
            if not row:
                continue
            ct, pt = row.split(",")
            entries[int(ct, 16)] = int(pt, 16)
        if len(entries) != D:
            raise ParameterError(f"codebook header says D={D}, found {len(entries)} entries")
        return cls(m, seed, entries)

    def save(self, path) -> None:
        Path(path).write_bytes(self.dumps().encode("ascii"))

    @classmethod
    def load(cls, path) -> "Codebook":
        return cls.loads(Path(path).read_bytes().decode("ascii"))


def _choose_plaintexts(M: int, D: int, rng: SplitMix64) -> np.ndarray:
    # partial Fisher-Yates from index 0 upward
    picks = rng.below_many(np.arange(M, M - D, -1, dtype=np.uint64)).tolist()
    pool: dict[int, int] = {}
    chosen = []
    for i, r in enumerate(picks):
        j = i + r
        vi, vj = pool.get(i, i), pool.get(j, j)
        pool[j] = vi
        chosen.append(vj)
    return np.array(chosen, dtype=np.uint32)


def build_codebook(cipher: PermutationCipher, D: int, seed: int) -> Codebook:
    if not 0 <= D <= cipher.size:
        raise ParameterError(f"codebook size must be in 0..{cipher.size}, got {D}")
    pts = _choose_plaintexts(cipher.size, D, SplitMix64(seed))
    cts = cipher.encrypt(pts)
    return Codebook(cipher.m, seed, dict(zip(cts.tolist(), pts.tolist())))


def analytic_success(M: int, D: int, S: int) -> float:
    """Chance that at least one of S uniform draws lands among D marked points of M."""
    if not 0 <= D <= M or S < 0:
        raise ParameterError(f"need 0 <= D <= M and S >= 0, got M={M}, D={D}, S={S}")
    if D == 0 or S == 0:
        return 0.0
    if D == M:
        return 1.0
    return -math.expm1(S * math.log1p(-D / M))


def wilson_interval(hits: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if n == 0:
        return (0.0, 1.0)
    phat = hits / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return (max(0.0, min(phat, centre - half)), min(1.0, max(phat, centre + half)))


@dataclass(frozen=True)
class AttackConfig:
    m: int
    trials: int
    seed: int = 0
    D: int | None = None
    S: int | None = None
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not MIN_BITS <= self.m <= MAX_BITS:
            raise ParameterError(f"block size must be {MIN_BITS}..{MAX_BITS} bits, got {self.m}")
        M = 1 << self.m
        if self.D is None:
            object.__setattr__(self, "D", min(M, 1 << (self.m // 2 + 2)))
        if self.S is None:
            object.__setattr__(self, "S", 1 << (self.m // 2))
        if not 0 <= self.D <= M:
            raise ParameterError(f"dictionary size must be in 0..{M}, got {self.D}")
        if self.S < 0:
            raise ParameterError(f"sample count must be >= 0, got {self.S}")
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed <= MASK64:
            raise ParameterError("seed must be an unsigned 64-bit value")

    @property
    def M(self) -> int:
        return 1 << self.m


@dataclass(frozen=True)
class AttackResult:
    m: int
    D: int
    S: int
    trials: int
    seed: int
    hits: int
    recovered_total: int
    hit_rate: float
    recovered_mean: float
    expected_recovered: float
    analytic: float
    ci95: tuple[float, float]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ci95"] = list(self.ci95)
        d["seed"] = str(self.seed)
        return d


@dataclass(frozen=True)
class TrialOutcome:
    recovered: int
    codebook: Codebook


def run_trial(cfg: AttackConfig, t: int) -> TrialOutcome:
    rng = SplitMix64(splitmix64((cfg.seed + t) & MASK64))
    cipher = make_permutation(cfg.m, rng.next())
    book = build_codebook(cipher, cfg.D, rng.next())
    pts = rng.below_many(np.full(cfg.S, cfg.M, dtype=np.uint64)).astype(np.uint32)
    cts = cipher.encrypt(pts)
    book_cts = np.fromiter(book.entries.keys(), dtype=np.uint32, count=book.D)
    found = np.isin(cts, book_cts)
    for ct, pt in zip(cts[found].tolist(), pts[found].tolist()):
        assert book.entries[ct] == pt
    return TrialOutcome(int(found.sum()), book)


def run_trials(cfg: AttackConfig) -> AttackResult:
    if cfg.M * cfg.trials > cfg.budget:
        raise ResourceError(f"{cfg.trials} trials of 2^{cfg.m} entries exceed the budget of {cfg.budget}")
    hits = 0
    recovered = 0
    for t in range(cfg.trials):
        outcome = run_trial(cfg, t)
        recovered += outcome.recovered
        hits += outcome.recovered > 0
    return AttackResult(
        m=cfg.m,
        D=cfg.D,
        S=cfg.S,
        trials=cfg.trials,
        seed=cfg.seed,
        hits=hits,
        recovered_total=recovered,
        hit_rate=hits / cfg.trials,
        recovered_mean=recovered / cfg.trials,
        expected_recovered=cfg.S * cfg.D / cfg.M,
        analytic=analytic_success(cfg.M, cfg.D, cfg.S),
        ci95=wilson_interval(hits, cfg.trials),
    )
