"""Self-configuring separable-function bank for Simon's problem.

A bank holds n programmable XOR cascades, one per output bit of f, all
wired to the same x bus.  Circuit i computes f'_i(x) = y_i XOR r_i.x where
r_i is its row of s controls.  Imposing a data element (x, f(x)) on the
outputs ripples back into the y register; a y that changes marks a circuit
that disagrees with the data, and the H-pulse toggles its s control for a
changed input bit.  Once the rows span an (n-1)-dimensional space, the
mesh settles into the secret string.
"""

from __future__ import annotations

import hashlib
import math
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .bits import BitsLike, bit, dot, format_bits, indices, to_int, unit
from .errors import BudgetExceeded, ConflictError, SecretZero
from .railnet import CellKind, Polarity, Rail, SwitchNet, cell_switches, oriented_switch, resolve

# ---------------------------------------------------------------- instances


def _feistel(value: int, n: int, key: bytes) -> int:
    """Keyed permutation of n-bit values (cycle-walking Feistel)."""
    half = (n + 1) // 2
    mask = (1 << half) - 1

    def rnd(r: int, k: int) -> int:
        digest = hashlib.blake2b(r.to_bytes(8, "big") + bytes([k]), key=key, digest_size=8).digest()
        return int.from_bytes(digest, "big") & mask

    while True:
        left, right = value >> half, value & mask
        for k in range(4):
            left, right = right, left ^ rnd(right, k)
        value = (left << half) | right
        if value < 1 << n:
            return value


@dataclass
class SimonInstance:
    """2:1 function with f(x) = f(x XOR secret).

    Tables up to n = 20 are materialized; wider instances evaluate a keyed
    permutation of the pair representative min(x, x XOR secret).
    """

    n: int
    secret: int
    table: tuple | None = field(default=None, repr=False)
    key: bytes = field(default=b"", repr=False)
    query_count: int = 0

    def value(self, x: int) -> int:
        """f(x) without touching the query counter."""
        if self.table is not None:
            return self.table[x]
        return _feistel(min(x, x ^ self.secret), self.n, self.key)

    def query(self, x: int) -> int:
        self.query_count += 1
        return self.value(x)


def make_instance(n: int, secret: BitsLike, seed) -> SimonInstance:
    if n < 1:
        raise ValueError("n must be at least 1")
    s = to_int(secret, n)
    if s == 0:
        raise SecretZero("the all-zero secret string is not allowed")
    rng = random.Random(seed)
    if n > 20:
        return SimonInstance(n, s, key=rng.randbytes(16))
    values = rng.sample(range(1 << n), 1 << (n - 1))
    table = [0] * (1 << n)
    reps = (x for x in range(1 << n) if x < x ^ s)
    for x, v in zip(reps, values):
        table[x] = table[x ^ s] = v
    return SimonInstance(n, s, tuple(table))


# Output values of the worked four-bit example.  The pair {0100, 1101} never
# appears in the trace; it takes the smallest value left unused.
_WORKED_VALUES = {
    "0000": "1101", "1000": "1000", "1100": "1001", "1110": "0110",
    "1111": "1110", "1011": "0010", "1010": "0111", "0100": "0000",
}


def worked_instance() -> SimonInstance:
    n, s = 4, 0b1001
    table = [0] * 16
    for x, v in _WORKED_VALUES.items():
        xi = int(x, 2)
        table[xi] = table[xi ^ s] = int(v, 2)
    return SimonInstance(n, s, tuple(table))


# -------------------------------------------------------------------- traces


@dataclass(frozen=True)
class DataElement:
    x: int
    f: int


def parse_trace(text: str) -> tuple[int, list[DataElement]]:
    """Lines of '<x> <f>' binary strings; the first must be x = 0."""
    elements, n = [], None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<x> <f>', got {line!r}")
        if n is None:
            n = len(parts[0])
        try:
            elements.append(DataElement(to_int(parts[0], n), to_int(parts[1], n)))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if not elements:
        raise ValueError("trace is empty")
    if elements[0].x != 0:
        raise ValueError("the first trace element must have x = 0")
    return n, elements


def load_trace(path) -> tuple[int, list[DataElement]]:
    return parse_trace(Path(path).read_text())


def worked_trace_path():
    return resources.files("ttmsim") / "data" / "worked_example.trace"


def format_trace(n: int, elements: Iterable[DataElement]) -> str:
    return "".join(f"{format_bits(e.x, n)} {format_bits(e.f, n)}\n" for e in elements)


# ---------------------------------------------------------- separable circuits


@dataclass(frozen=True)
class SeparableCircuit:
    """One programmable cascade: f'(x) = y XOR s_row.x."""

    n: int
    s_row: int


@lru_cache(maxsize=None)
def programmable_net(n: int) -> SwitchNet:
    """Cascade of configurable cells driven by x_j, s_j and s_j_bar.

    In each cell the vertical branches hold a P switch on x in parallel with
    an N switch on x in series with an N switch on s_bar; the horizontal
    branches hold N on x in series with N on s.  With s = 1 the cell passes
    or crosses the rail pair with x, with s = 0 it always passes.
    """
    N, P = Polarity.N, Polarity.P
    switches = []
    hi, lo = "y", "y_bar"
    for j in range(1, n + 1):
        z, zb = f"z{j}", f"zb{j}"
        x, s, sb = f"x{j}", f"s{j}", f"sb{j}"
        for name, top, bottom in (("V1", hi, z), ("V2", zb, lo)):
            mid = f"{name}.{j}"
            switches += [
                oriented_switch(P, x, top, bottom, name),
                oriented_switch(N, x, top, mid, name),
                oriented_switch(N, sb, mid, bottom, name),
            ]
        for name, top, bottom in (("H1", hi, zb), ("H2", z, lo)):
            mid = f"{name}.{j}"
            switches += [oriented_switch(N, x, top, mid, name), oriented_switch(N, s, mid, bottom, name)]
        hi, lo = z, zb
    return SwitchNet.build(switches, {})


def ripple_y(circuit: SeparableCircuit, x: int, f_imposed: int, *, switch_level: bool = False) -> int:
    """y forced by imposing f' = f_imposed at input x."""
    if not switch_level:
        return f_imposed ^ dot(circuit.s_row, x)
    n = circuit.n
    net = programmable_net(n)
    gates = {}
    for j in range(n):
        xj, sj = bit(x, j, n), bit(circuit.s_row, j, n)
        gates[f"x{j + 1}"] = Rail.of(xj)
        gates[f"s{j + 1}"] = Rail.of(sj)
        gates[f"sb{j + 1}"] = Rail.of(1 - sj)
    drivers = {f"z{n}": Rail.of(f_imposed), f"zb{n}": Rail.of(1 - f_imposed)}
    pots = resolve(net, gates, drivers=drivers, observe=["y", "y_bar"])
    return pots["y"].bit


# ---------------------------------------------------------------------- bank


@dataclass
class FunctionBank:
    n: int
    rows: list
    y: list
    initial_y: tuple
    x_bus: int = 0
    x_prev: int = 0
    y_prev: list = field(default_factory=list)

    def circuit(self, i: int) -> SeparableCircuit:
        return SeparableCircuit(self.n, self.rows[i])

    def outputs(self, x: int) -> int:
        """The bank's f' vector at x."""
        value = 0
        for r, y in zip(self.rows, self.y):
            value = (value << 1) | (y ^ dot(r, x))
        return value


def init_bank(n: int, f0: int) -> FunctionBank:
    """All s controls off, x = 0, y chosen so the outputs read f0; latches primed."""
    y = [bit(f0, i, n) for i in range(n)]
    return FunctionBank(n, [0] * n, y, tuple(y), 0, 0, list(y))


@dataclass(frozen=True)
class PulseReport:
    x: int
    f: int
    toggled: tuple  # circuit indices whose y changed (0-based)
    flipped: tuple  # (circuit, bit) pairs of s controls toggled
    no_change: bool = False


def h_pulse(
    bank: FunctionBank,
    new_x: int,
    new_f: int,
    rng: random.Random | None = None,
    *,
    switch_level: bool = False,
) -> PulseReport:
    """Ripple, toggle s controls of circuits whose y moved, then latch."""
    n = bank.n
    changed = new_x ^ bank.x_prev
    if not changed:
        return PulseReport(new_x, new_f, (), (), no_change=True)
    candidates = indices(changed, n)

    def ripple(i: int) -> int:
        return ripple_y(bank.circuit(i), new_x, bit(new_f, i, n), switch_level=switch_level)

    bank.x_bus = new_x
    bank.y = [ripple(i) for i in range(n)]
    toggled = tuple(i for i in range(n) if bank.y[i] != bank.y_prev[i])
    flipped = []
    for i in toggled:
        if len(candidates) == 1:
            j = candidates[0]
        else:
            j = (rng or random).choice(candidates)
        bank.rows[i] ^= unit(j, n)
        flipped.append((i, j))
        bank.y[i] = ripple(i)
    bank.x_prev = new_x
    bank.y_prev = list(bank.y)
    return PulseReport(new_x, new_f, toggled, tuple(flipped))


# --------------------------------------------------------------- elimination


@dataclass(frozen=True)
class EliminationSystem:
    n: int
    rows: tuple
    rhs: tuple


def build_elimination(bank: FunctionBank) -> EliminationSystem:
    rhs = tuple(y ^ y0 for y, y0 in zip(bank.y, bank.initial_y))
    return EliminationSystem(bank.n, tuple(bank.rows), rhs)


def _reduce(pairs: Iterable[tuple[int, int]]) -> tuple[dict[int, tuple[int, int]], bool]:
    """Echelon form of (row, rhs) pairs keyed by leading bit; flags a 0 = 1 row."""
    pivots: dict[int, tuple[int, int]] = {}
    for r, b in pairs:
        while r:
            lead = 1 << (r.bit_length() - 1)
            if lead not in pivots:
                pivots[lead] = (r, b)
                break
            pr, pb = pivots[lead]
            r, b = r ^ pr, b ^ pb
        if not r and b:
            return pivots, False
    return pivots, True


def gf2_rank(rows: Iterable[int]) -> int:
    pivots, _ = _reduce((r, 0) for r in rows)
    return len(pivots)


def _back_substitute(pivots: dict[int, tuple[int, int]]) -> int:
    """Unique solution of a full-rank echelon system."""
    x = 0
    for lead in sorted(pivots):
        r, b = pivots[lead]
        if dot(r ^ lead, x) ^ b:
            x |= lead
    return x


@dataclass(frozen=True)
class MeshResult:
    candidate: int | None
    rank: int
    consistent: bool
    coax_attempts: int


def settle_mesh(system: EliminationSystem) -> MeshResult:
    """Candidate secret from the bank rows, found by coaxing one input high at a time."""
    n = system.n
    pairs = list(zip(system.rows, system.rhs))
    pivots, consistent = _reduce(pairs)
    rank = len(pivots)
    if rank != n - 1 or not consistent:
        return MeshResult(None, rank, consistent, 0)
    homogeneous = [(r, 0) for r in system.rows]
    for k in range(n):
        forced, ok = _reduce(homogeneous + [(unit(k, n), 1)])
        if ok:
            return MeshResult(_back_substitute(forced), rank, consistent, k + 1)
    raise AssertionError("rank n-1 system with no coaxable input")


@dataclass(frozen=True)
class FeedbackCell:
    """Cross-coupled cell tying a Toffoli qubit's corners back to its gates."""

    @staticmethod
    def stable(y: int, z: int, gate: int) -> bool:
        # straight-through (vertical paths) needs the gates low, crossed
        # (horizontal paths) needs them high
        return gate == int(z != y)

    @staticmethod
    def stable_switch_level(y: int, z: int, gate: int) -> bool:
        switches = cell_switches(CellKind.IDENTITY, "y", "y_bar", "z", "zb", ("g", "gb", "p", "pb"))
        net = SwitchNet.build(switches, {})
        drivers = {"y": Rail.of(y), "y_bar": Rail.of(1 - y), "z": Rail.of(z), "zb": Rail.of(1 - z)}
        try:
            resolve(net, dict.fromkeys(("g", "gb", "p", "pb"), Rail.of(gate)), drivers=drivers)
        except ConflictError:
            return False
        return True


def mesh_fixpoint(system: EliminationSystem, x: int) -> bool:
    """Whether the x bus is a stable state of every row's feedback chain."""
    n = system.n
    for r, b in zip(system.rows, system.rhs):
        level = 0
        for j in indices(r, n):
            nxt = level ^ bit(x, j, n)
            assert FeedbackCell.stable(level, nxt, bit(x, j, n))
            level = nxt
        if level != b:
            return False
    return True


def relax_mesh(system: EliminationSystem, seed, max_steps: int = 10_000) -> tuple[int | None, int]:
    """Seeded local relaxation from a coaxed start; returns (state, steps).

    Flips one input of an unsatisfied row at a time.  Slow and only for
    demonstration; ``settle_mesh`` is the normative path.
    """
    n = system.n
    rng = random.Random(seed)
    x = unit(rng.randrange(n), n)
    for step in range(max_steps):
        bad = [(r, b) for r, b in zip(system.rows, system.rhs) if dot(r, x) != b]
        if not bad and x:
            return x, step
        if not bad:
            x = unit(rng.randrange(n), n)
            continue
        r, _ = rng.choice(bad)
        x ^= unit(rng.choice(indices(r, n)), n)
    return None, max_steps


def verify_candidate(instance: SimonInstance, s_hat: int) -> bool:
    """One counted query at s_hat, compared with f(0) from the first data element."""
    if s_hat == 0:
        raise ValueError("candidate must be nonzero")
    return instance.query(s_hat) == instance.value(0)


# ----------------------------------------------------------------- data walk


@dataclass
class WalkState:
    x: int = 0
    order: list = field(default_factory=list)
    last: int | None = None
    visited: set = field(default_factory=lambda: {0})


def next_data(
    instance: SimonInstance,
    walk: WalkState,
    rng: random.Random,
    mode: str = "single",
) -> DataElement:
    """Move x to a new input and query f there.

    Single-bit mode visits the indices in shuffled blocks of n, so every
    bit flips equally often, and never flips the same bit twice running.
    Within a block it takes the first remaining index that leads to an
    input not seen before, if there is one.  General mode flips a random
    nonempty subset.
    """
    n = instance.n
    if mode == "single":
        if not walk.order:
            walk.order = list(range(n))
            rng.shuffle(walk.order)
            if n > 1 and walk.order[0] == walk.last:
                walk.order[0], walk.order[-1] = walk.order[-1], walk.order[0]
        j = next((j for j in walk.order if walk.x ^ unit(j, n) not in walk.visited), walk.order[0])
        walk.order.remove(j)
        walk.last = j
        walk.x ^= unit(j, n)
    elif mode == "general":
        walk.x ^= rng.randrange(1, 1 << n)
    else:
        raise ValueError(f"unknown walk mode {mode!r}")
    walk.visited.add(walk.x)
    return DataElement(walk.x, instance.query(walk.x))


# --------------------------------------------------------------------- runs


@dataclass(frozen=True)
class SolveConfig:
    max_data: int | None = None  # defaults to 50 n
    walk: str = "single"
    cadence: int = 1
    trace: bool = False
    switch_level: bool = False


@dataclass
class RunReport:
    n: int
    seed: object = None
    secret: str | None = None
    verified: bool = False
    data_elements: int = 0
    h_pulses: int = 0
    eliminations: int = 0
    queries: int = 0
    coax_attempts: int = 0
    rows: list = field(default_factory=list)
    window_ranks: list = field(default_factory=list)
    trace: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "seed": self.seed,
            "secret": self.secret,
            "verified": self.verified,
            "data_elements": self.data_elements,
            "h_pulses": self.h_pulses,
            "eliminations": self.eliminations,
            "queries": self.queries,
            "coax_attempts": self.coax_attempts,
            "rows": [format_bits(r, self.n) for r in self.rows],
            "trace": self.trace,
        }


EliminationHook = Callable[[EliminationSystem, MeshResult], None]


def _run(
    n: int,
    f0: int,
    feed: Iterable[DataElement],
    verify: Callable[[int], bool | None],
    config: SolveConfig,
    rng: random.Random,
    report: RunReport,
    on_elimination: EliminationHook | None,
) -> RunReport:
    bank = init_bank(n, f0)
    report.data_elements = 1
    if config.trace:
        report.trace.append({"x": format_bits(0, n), "f": format_bits(f0, n), "y": format_bits(f0, n)})

    # a candidate the data cannot confirm or refute stays pending; it is
    # reported only if nothing replaces it before the data runs out
    pending: list[int] = []

    def eliminate() -> bool:
        system = build_elimination(bank)
        mesh = settle_mesh(system)
        report.eliminations += 1
        pending.clear()
        if on_elimination is not None:
            on_elimination(system, mesh)
        if mesh.candidate is None:
            return False
        report.coax_attempts += mesh.coax_attempts
        verdict = verify(mesh.candidate)
        if verdict is None:
            pending.append(mesh.candidate)
        if not verdict:
            return False
        report.secret = format_bits(mesh.candidate, n)
        report.verified = True
        return True

    done = eliminate()
    for element in feed:
        if done:
            break
        pulse = h_pulse(bank, element.x, element.f, rng, switch_level=config.switch_level)
        report.data_elements += 1
        report.h_pulses += 1
        if report.h_pulses % n == 0:
            report.window_ranks.append(gf2_rank(bank.rows))
        if config.trace:
            report.trace.append(
                {
                    "x": format_bits(element.x, n),
                    "f": format_bits(element.f, n),
                    "toggled": [i + 1 for i in pulse.toggled],
                    "s_toggles": [[i + 1, j + 1] for i, j in pulse.flipped],
                    "y": "".join(map(str, bank.y)),
                    "rows": [format_bits(r, n) for r in bank.rows],
                }
            )
        if report.data_elements % config.cadence == 0:
            done = eliminate()
    report.rows = list(bank.rows)
    if not done and pending:
        report.secret = format_bits(pending[0], n)
        done = True
    if not done:
        raise BudgetExceeded(report)
    return report


def solve_simon(
    instance: SimonInstance,
    config: SolveConfig = SolveConfig(),
    seed=None,
    *,
    on_elimination: EliminationHook | None = None,
) -> RunReport:
    """Stream data into the bank until a verified secret appears or the budget runs out."""
    n = instance.n
    budget = config.max_data or 50 * n
    rng = random.Random(seed)
    walk = WalkState()
    start = instance.query_count
    report = RunReport(n, seed)

    def feed():
        while report.data_elements < budget:
            yield next_data(instance, walk, rng, config.walk)

    try:
        return _run(n, instance.query(0), feed(), lambda s: verify_candidate(instance, s),
                    config, rng, report, on_elimination)
    finally:
        report.queries = instance.query_count - start


def replay(
    elements: Sequence[DataElement],
    n: int,
    instance: SimonInstance | None = None,
    config: SolveConfig = SolveConfig(trace=True),
    *,
    on_elimination: EliminationHook | None = None,
) -> RunReport:
    """Run the bank on a fixed data sequence.

    Candidates are checked against ``instance`` when given, otherwise
    against the trace itself; a candidate whose f value is not in the trace
    is accepted unverified.
    """
    known = {e.x: e.f for e in elements}
    report = RunReport(n, None)
    f0 = elements[0].f

    def verify(s_hat: int) -> bool | None:
        report.queries += 1
        if instance is not None:
            return instance.value(s_hat) == f0
        if s_hat in known:
            return known[s_hat] == f0
        return None

    report.queries = len(elements)
    return _run(n, f0, iter(elements[1:]), verify, config, random.Random(0), report, on_elimination)


def replay_file(path, instance: SimonInstance | None = None, **kwargs) -> RunReport:
    n, elements = load_trace(path)
    return replay(elements, n, instance, **kwargs)


# ------------------------------------------------------------ probabilities


def convergence_probability_bound(n: int | float) -> float:
    """prod_{k=0}^{n-1} (2^n - 2^k) / 2^n; pass math.inf for the limit."""
    if n == math.inf:
        terms = range(1, 200)
    else:
        if n < 1:
            raise ValueError("n must be at least 1")
        terms = range(1, int(n) + 1)
    return math.prod(1.0 - 2.0 ** -j for j in terms)


def orthogonal_rank_probability(n: int, draws: int | None = None) -> float:
    """Exact chance that ``draws`` uniform vectors from the (n-1)-dimensional
    secret-orthogonal space span all of it."""
    draws = n if draws is None else draws
    if draws < n - 1:
        return 0.0
    return math.prod(1.0 - 2.0 ** -(draws - k) for k in range(n - 1))


def sample_orthogonal_rank_fraction(n: int, trials: int, seed, draws: int | None = None) -> float:
    """Monte Carlo estimate of :func:`orthogonal_rank_probability`."""
    draws = n if draws is None else draws
    rng = random.Random(seed)
    hits = 0
    for _ in range(trials):
        secret = rng.randrange(1, 1 << n)
        rows = []
        while len(rows) < draws:
            v = rng.getrandbits(n)
            if not dot(v, secret):
                rows.append(v)
        hits += gf2_rank(rows) == n - 1
    return hits / trials


def _trial(args) -> tuple[int | None, list[int]]:
    n, trial_seed, max_factor, walk = args
    rng = random.Random(trial_seed)
    secret = rng.randrange(1, 1 << n)
    instance = make_instance(n, secret, rng.getrandbits(64))
    config = SolveConfig(max_data=max_factor * n, walk=walk)
    try:
        report = solve_simon(instance, config, seed=rng.getrandbits(64))
    except BudgetExceeded as exc:
        return None, exc.report.window_ranks
    ok = report.secret == format_bits(secret, n)
    return (report.data_elements if ok else None), report.window_ranks


def monte_carlo(
    n: int,
    trials: int,
    seed,
    *,
    max_factor: int = 50,
    walk: str = "single",
    workers: int | None = None,
) -> dict:
    """Seeded batch of random instances; deterministic regardless of ``workers``."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    jobs = [(n, f"{seed}:{i}", max_factor, walk) for i in range(trials)]
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_trial, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        results = [_trial(job) for job in jobs]
    used = [d for d, _ in results if d is not None]
    windows = [r for _, ranks in results for r in ranks]
    return {
        "n": n,
        "trials": trials,
        "seed": seed,
        "walk": walk,
        "budget": max_factor * n,
        "successes": len(used),
        "success_rate": len(used) / trials,
        "median_data_elements": statistics.median(used) if used else None,
        "mean_data_elements": statistics.fmean(used) if used else None,
        "rank_fraction": (sum(r == n - 1 for r in windows) / len(windows)) if windows else None,
        "bound": convergence_probability_bound(n),
        "runs": [d for d, _ in results],
    }


def estimate_ripple_delay(
    n_qubits: int,
    transition_frequency: float,
    reversibility_penalty: float = 1.0,
    iterations: int = 1,
) -> tuple[float, float]:
    """(seconds per ripple through n gates, seconds for all iterations)."""
    if min(n_qubits, transition_frequency, reversibility_penalty, iterations) <= 0:
        raise ValueError("all delay parameters must be positive")
    per_ripple = n_qubits / transition_frequency * reversibility_penalty
    return per_ripple, per_ripple * iterations
