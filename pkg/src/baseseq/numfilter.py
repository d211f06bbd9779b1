"""Arithmetic pruning: sum quadruples, residue-class profiles, column cases.

Every valid quad obeys a stack of integer constraints that can be
enumerated long before any sequence is materialized:

  * The eight row sums satisfy a^2+b^2+c^2+d^2 = 4n+2 (plain and
    alternated), fixed parities, and mod-4 laws tying the plain sums to
    the alternated ones according to n mod 4.  Normal quads additionally
    force a = b+2 (and a' = b'-+2 by n's parity); near-normal quads force
    a = b'+2 and b = a'-2.  For n = 8k-2 the normal-quad system is
    unsolvable, which is the executable nonexistence obstruction.

  * Splitting positions into residue classes mod m turns each sequence
    into a short vector of class sums.  Reducing the polynomial norm
    identity mod z^m - 1 gives, for every m >= 2: the class-sum squares
    add to 4n+2, and the periodic autocorrelations of the four vectors
    cancel at every shift.  Class sums are bounded by class sizes with
    matching parity, and end-column congruences project onto classes.

  * End-column congruences on the signs themselves: paired columns of
    A,B (positions i and n+2-i) sum to 2 mod 4 at i = 1 and to 0 mod 4
    for i = 2..[(n+1)/2]; paired columns of C,D (positions i and n+1-i)
    sum to 0 mod 4 for i = 2..[n/2].  Eight of the sixteen sign columns
    survive at each constrained index.

The class-level end-column congruence is enforced per unordered class
pair: the pair containing class 1 on the A,B side carries the 2 mod 4
correction (it holds the end columns), self-paired classes reduce to a
parity statement, and every other pair sums to 0 mod 4.  On the C,D side
the congruence holds for all class pairs including the one containing
position 1; the sign-level list keeps the printed i >= 2 range, which is
strictly weaker, and the mismatch is intentional.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .equiv import profile_orbit
from .errors import PreconditionError
from .seqcore import Kind, SeqQuad, SumProfile

# --- sum-quadruple feasibility and enumeration -----------------------------


def _mod4_delta(n: int) -> tuple[int, int, int, int]:
    """Required (plain - alternated) mod 4 for (a, b, c, d) given n mod 4."""
    return {
        0: (0, 0, 0, 0),
        1: (2, 2, 0, 0),
        2: (2, 2, 2, 2),
        3: (0, 0, 2, 2),
    }[n % 4]


def feasible_sum_profile(profile: SumProfile, n: int, kind: Kind) -> bool:
    """Full feasibility check for an eight-sum tuple."""
    a, b, c, d, aa, ba, ca, da = profile.as_tuple()
    target = 4 * n + 2
    if profile.square_sum() != target or profile.alt_square_sum() != target:
        return False
    for v in (a, b, aa, ba):
        if abs(v) > n + 1 or (v - (n + 1)) % 2 != 0:
            return False
    for v in (c, d, ca, da):
        if abs(v) > n or (v - n) % 2 != 0:
            return False
    if n % 2 == 0:
        if (c - d) % 4 != 0 or (ca - da) % 4 != 0:
            return False
    else:
        if (a - b - 2) % 4 != 0 or (aa - ba - 2) % 4 != 0:
            return False
    deltas = _mod4_delta(n)
    for plain, alt, delta in zip((a, b, c, d), (aa, ba, ca, da), deltas):
        if (plain - alt - delta) % 4 != 0:
            return False
    if kind is Kind.NS:
        if a != b + 2:
            return False
        if n % 2 == 1 and aa != ba - 2:
            return False
        if n % 2 == 0 and aa != ba + 2:
            return False
    elif kind is Kind.NNS:
        if a != ba + 2 or b != aa - 2:
            return False
    return True


def canonical_sum_profile(profile: SumProfile, n: int, kind: Kind) -> SumProfile:
    """Least feasible member of the profile's signed-permutation orbit."""
    best = None
    for img in profile_orbit(profile.as_tuple(), n, kind):
        cand = SumProfile.from_tuple(img)
        if feasible_sum_profile(cand, n, kind):
            best = cand
            break  # orbit is sorted; first feasible member is least
    if best is None:
        raise PreconditionError("profile is not feasible for this kind")
    return best


def _half_tuples(n: int) -> list[tuple[int, int, int, int]]:
    """All (a, b, c, d) with the right parities, bounds, square sum and
    the mod-4 law for one half (plain or alternated)."""
    target = 4 * n + 2
    ab_par = (n + 1) % 2
    cd_par = n % 2
    out = []
    for a in range(-(n + 1), n + 2):
        if a % 2 != ab_par or a * a > target:
            continue
        for b in range(-(n + 1), n + 2):
            if b % 2 != ab_par or a * a + b * b > target:
                continue
            if n % 2 == 1 and (a - b - 2) % 4 != 0:
                continue
            rest = target - a * a - b * b
            for c in range(-n, n + 1):
                if c % 2 != cd_par or c * c > rest:
                    continue
                dd = rest - c * c
                droot = int(round(dd ** 0.5))
                if droot * droot != dd:
                    continue
                for d in (-droot, droot) if droot else (0,):
                    if d % 2 != cd_par:
                        continue
                    if n % 2 == 0 and (c - d) % 4 != 0:
                        continue
                    out.append((a, b, c, d))
    return sorted(set(out))


def sum_profiles(n: int, kind: Kind) -> list[SumProfile]:
    """All feasible sum profiles for (n, kind), one per orbit, sorted.

    Orbits are taken under the signed-permutation action of the
    deduplication transforms (negate/reverse/interchange C,D, negate and
    interchange A,B, alternate all four); the representative is the least
    feasible orbit member.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if kind is Kind.NNS and n % 2 != 0:
        raise PreconditionError("near-normal profiles require even n")
    halves = _half_tuples(n)
    plain = halves
    starred = halves
    if kind is Kind.NS:
        plain = [t for t in plain if t[0] == t[1] + 2]
        want = -2 if n % 2 == 1 else 2
        starred = [t for t in starred if t[0] == t[1] + want]

    by_mod4: dict[tuple[int, int, int, int], list[tuple[int, int, int, int]]] = {}
    for t in starred:
        by_mod4.setdefault(tuple(v % 4 for v in t), []).append(t)

    found = set()
    deltas = _mod4_delta(n)
    for t1 in plain:
        key = tuple((v - delta) % 4 for v, delta in zip(t1, deltas))
        for t2 in by_mod4.get(key, ()):
            if kind is Kind.NNS and (t1[0] != t2[1] + 2 or t1[1] != t2[0] - 2):
                continue
            profile = SumProfile.from_tuple(t1 + t2)
            if feasible_sum_profile(profile, n, kind):
                found.add(canonical_sum_profile(profile, n, kind).as_tuple())
    return [SumProfile.from_tuple(t) for t in sorted(found)]


def ns_parity_obstruction(n: int) -> bool:
    """True iff n = 8k-2, where the normal-quad sum system is unsolvable.

    The feasibility system forces odd x = y+2 and even z, w with
    x^2+y^2+z^2+w^2 = 4n+2 and z = w mod 4; reducing mod 8 (odd squares
    are 1 mod 8) rules out every branch when n = 8k-2, so
    ``sum_profiles(n, NS)`` is empty exactly at these n.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    return n % 8 == 6


# --- end-column sign cases --------------------------------------------------


@dataclass(frozen=True)
class ColumnCaseTable:
    """Admissible sign columns (x_i, x_mirror, y_i, y_mirror) per pair index.

    The A,B side pairs positions (i, n+2-i) for i = 1..[(n+1)/2]; the C,D
    side pairs (i, n+1-i) for i = 1..[n/2].  A middle self-paired position
    (odd sequence length) is not part of the table and is unconstrained.
    """

    side: str
    n: int
    kind: Kind
    cases: dict[int, tuple[tuple[int, int, int, int], ...]]


_PM = (1, -1)


def _ab_columns(n: int, i: int, kind: Kind) -> list[tuple[int, int, int, int]]:
    want = 2 if i == 1 else 0
    cols = []
    mirror_is_last = (i == 1)  # position n+2-i = n+1
    for x in _PM:
        for z in _PM:
            if kind is Kind.NS:
                y = x
                w = -1 if mirror_is_last else z
                if mirror_is_last and z != 1:
                    continue
            elif kind is Kind.NNS:
                y = x if i % 2 == 1 else -x
                if mirror_is_last:
                    if z != 1:
                        continue
                    w = -1
                else:
                    w = z if (n + 2 - i) % 2 == 1 else -z
            else:
                y, w = None, None
            if kind is Kind.BS:
                for y2 in _PM:
                    for w2 in _PM:
                        if (x + z + y2 + w2) % 4 == want:
                            cols.append((x, z, y2, w2))
            else:
                if (x + z + y + w) % 4 == want:
                    cols.append((x, z, y, w))
    return sorted(set(cols))


def _cd_columns(i: int) -> list[tuple[int, int, int, int]]:
    cols = []
    for x in _PM:
        for z in _PM:
            for y in _PM:
                for w in _PM:
                    if i == 1 or (x + z + y + w) % 4 == 0:
                        cols.append((x, z, y, w))
    return cols


def column_cases(n: int, side: str, kind: Kind) -> ColumnCaseTable:
    """Admissible end-column sign patterns for one side of a quad."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if side not in ("AB", "CD"):
        raise PreconditionError("side must be AB or CD")
    cases = {}
    if side == "AB":
        for i in range(1, (n + 1) // 2 + 1):
            cases[i] = tuple(_ab_columns(n, i, kind))
    else:
        for i in range(1, n // 2 + 1):
            cases[i] = tuple(_cd_columns(i))
    return ColumnCaseTable(side, n, kind, cases)


# --- residue-class profiles --------------------------------------------------


@dataclass(frozen=True)
class ResidueProfile:
    """Class sums of the four sequences modulo ``modulus``.

    Classes are indexed 1..m; position j belongs to class ((j-1) mod m)+1.
    """

    modulus: int
    a_class_sums: tuple[int, ...]
    b_class_sums: tuple[int, ...]
    c_class_sums: tuple[int, ...]
    d_class_sums: tuple[int, ...]

    def vectors(self) -> tuple[tuple[int, ...], ...]:
        return (self.a_class_sums, self.b_class_sums,
                self.c_class_sums, self.d_class_sums)

    def square_sum(self) -> int:
        return sum(x * x for v in self.vectors() for x in v)

    def as_flat(self) -> tuple[int, ...]:
        return tuple(x for v in self.vectors() for x in v)

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.as_flat())


def class_of(pos: int, m: int) -> int:
    """0-based residue class of a 1-based position."""
    return (pos - 1) % m


def class_sizes(length: int, m: int) -> tuple[int, ...]:
    """Number of positions 1..length in each class (0-based class order)."""
    return tuple((length - i) // m + 1 for i in range(1, m + 1))


def sequence_class_sums(seq, m: int) -> tuple[int, ...]:
    out = [0] * m
    for j, x in enumerate(seq.elements):
        out[j % m] += x
    return tuple(out)


def quad_residue_profile(quad: SeqQuad, m: int) -> ResidueProfile:
    return ResidueProfile(m, *(sequence_class_sums(s, m) for s in quad.seqs()))


def _alt_weight_ok(m: int) -> bool:
    return m % 2 == 0


def _vector_alt_sum(v: tuple[int, ...]) -> int:
    """Alternated row sum recovered from class sums (even modulus only)."""
    return sum(x if i % 2 == 0 else -x for i, x in enumerate(v))


def _enum_vectors(sizes: tuple[int, ...], total: int,
                  alt_total: Optional[int]) -> list[tuple[int, ...]]:
    """All vectors with per-class bound/parity and prescribed (alternated) sums."""
    m = len(sizes)
    suffix_cap = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix_cap[i] = suffix_cap[i + 1] + sizes[i]
    out = []
    vec = [0] * m

    def rec(i: int, run: int, alt_run: int):
        if i == m:
            if run == total and (alt_total is None or alt_run == alt_total):
                out.append(tuple(vec))
            return
        cap = suffix_cap[i + 1]
        size = sizes[i]
        lo = -size
        for val in range(lo, size + 1, 2):
            if abs(total - run - val) > cap:
                continue
            if alt_total is not None:
                aval = val if i % 2 == 0 else -val
                if abs(alt_total - alt_run - aval) > cap:
                    continue
            vec[i] = val
            rec(i + 1, run + val, alt_run + (val if i % 2 == 0 else -val))
        vec[i] = 0

    rec(0, 0, 0)
    return out


def _signature(v: tuple[int, ...], m: int) -> tuple[int, ...]:
    """(sum of squares, periodic autocorrelations at shifts 1..[m/2])."""
    sq = sum(x * x for x in v)
    sig = [sq]
    for s in range(1, m // 2 + 1):
        aper = sum(v[i] * v[i + s] for i in range(m - s))
        coaper = sum(v[i] * v[i + m - s] for i in range(s)) if s else 0
        sig.append(aper + coaper)
    return tuple(sig)


def _pairs_congruent(u: tuple[int, ...], v: tuple[int, ...], n: int, m: int,
                     offset: int, end_correction: bool) -> bool:
    """Class-pair end-column congruence for one side.

    ``offset`` is the pairing constant: class j pairs with the class of
    position offset - j (offset = n+2 on the A,B side, n+1 on C,D).
    ``end_correction`` marks the side whose end pair sums to 2 mod 4.
    """
    for j0 in range(m):
        p0 = (offset - (j0 + 1) - 1) % m
        if p0 < j0:
            continue  # unordered pair already handled
        if p0 == j0:
            continue  # self-paired: parity only, automatic
        tot = u[j0] + v[j0] + u[p0] + v[p0]
        want = 2 if (end_correction and j0 == 0) else 0
        if tot % 4 != want:
            return False
    return True


def _derive_partner_sums(k: tuple[int, ...], n: int, m: int,
                         kind: Kind) -> tuple[int, ...]:
    """Class sums of B from those of A for a structured kind.

    The class of position n+1 loses 2 (that entry flips from +1 to -1);
    for near-normal quads every other class flips sign with the parity of
    its positions, which is well defined only for even m.
    """
    l0 = class_of(n + 1, m)
    if kind is Kind.NS:
        r = list(k)
        r[l0] -= 2
        return tuple(r)
    # near-normal: n even and m even put position n+1 in an odd-position
    # class, so the sign factor on the special class is +1
    assert l0 % 2 == 0
    r = [v if i % 2 == 0 else -v for i, v in enumerate(k)]
    r[l0] = k[l0] - 2
    return tuple(r)


def _vector_fits(v: tuple[int, ...], sizes: tuple[int, ...]) -> bool:
    return all(abs(x) <= s and (x - s) % 2 == 0 for x, s in zip(v, sizes))


def residue_profiles(n: int, m: int, s: SumProfile, kind: Kind,
                     ) -> list[ResidueProfile]:
    """All residue-class profiles at modulus m compatible with sum profile s.

    Enforced: class-size bounds and parities, plain column sums (and
    alternated sums when m is even), the class-pair end-column
    congruences, the square-sum identity and the vanishing periodic
    autocorrelation sums.  For structured kinds the B vector is derived
    from the A vector (near-normal derivation needs even m).
    """
    kr, pq = _residue_halves(n, m, s, kind)
    target = _join_target(n, m)
    by_sig: dict[tuple[int, ...], list[tuple]] = {}
    for p, q, sig in pq:
        by_sig.setdefault(sig, []).append((p, q))
    out = []
    for k, r, sig in kr:
        need = tuple(t - x for t, x in zip(target, sig))
        for p, q in by_sig.get(need, ()):
            out.append(ResidueProfile(m, k, r, p, q))
    out.sort(key=ResidueProfile.as_flat)
    return out


def _join_target(n: int, m: int) -> tuple[int, ...]:
    return (4 * n + 2,) + (0,) * (m // 2)


def _residue_halves(n: int, m: int, s: SumProfile, kind: Kind):
    """(k, r, sig) and (p, q, sig) half-lists for the join."""
    if m < 2:
        raise PreconditionError("modulus must be >= 2")
    if kind is Kind.NNS and m % 2 != 0:
        raise PreconditionError("near-normal residue profiles require even m")
    alt = _alt_weight_ok(m)
    sizes_ab = class_sizes(n + 1, m)
    sizes_cd = class_sizes(n, m)

    ks = _enum_vectors(sizes_ab, s.a, s.a_alt if alt else None)
    kr = []
    if kind is Kind.BS:
        rs = _enum_vectors(sizes_ab, s.b, s.b_alt if alt else None)
        for k in ks:
            for r in rs:
                if _pairs_congruent(k, r, n, m, n + 2, end_correction=True):
                    kr.append((k, r, _add_sigs(k, r, m)))
    else:
        for k in ks:
            r = _derive_partner_sums(k, n, m, kind)
            if not _vector_fits(r, sizes_ab) or sum(r) != s.b:
                continue
            if alt and _vector_alt_sum(r) != s.b_alt:
                continue
            if _pairs_congruent(k, r, n, m, n + 2, end_correction=True):
                kr.append((k, r, _add_sigs(k, r, m)))

    ps = _enum_vectors(sizes_cd, s.c, s.c_alt if alt else None)
    qs = _enum_vectors(sizes_cd, s.d, s.d_alt if alt else None)
    pq = []
    for p in ps:
        for q in qs:
            if _pairs_congruent(p, q, n, m, n + 1, end_correction=False):
                pq.append((p, q, _add_sigs(p, q, m)))
    return kr, pq


def _add_sigs(u: tuple[int, ...], v: tuple[int, ...], m: int) -> tuple[int, ...]:
    su = _signature(u, m)
    sv = _signature(v, m)
    return tuple(x + y for x, y in zip(su, sv))


def _check_parent(n: int, prof: ResidueProfile, s: SumProfile) -> None:
    sums = tuple(sum(v) for v in prof.vectors())
    if sums != (s.a, s.b, s.c, s.d):
        raise PreconditionError("profile column sums do not match the sum profile")
    if prof.square_sum() != 4 * n + 2:
        raise PreconditionError("profile square sum must equal 4n+2")


def _splits(coarse: tuple[int, ...], fine_sizes: tuple[int, ...],
            m: int) -> list[tuple[int, ...]]:
    """All vectors at modulus 2m whose class merge reproduces ``coarse``."""
    options: list[list[tuple[int, int]]] = []
    for i in range(m):
        lo_size, hi_size = fine_sizes[i], fine_sizes[i + m]
        opts = []
        for lo in range(-lo_size, lo_size + 1, 2):
            hi = coarse[i] - lo
            if abs(hi) <= hi_size and (hi - hi_size) % 2 == 0:
                opts.append((lo, hi))
        if not opts:
            return []
        options.append(opts)
    out = []
    vec = [0] * (2 * m)

    def rec(i: int):
        if i == m:
            out.append(tuple(vec))
            return
        for lo, hi in options[i]:
            vec[i] = lo
            vec[i + m] = hi
            rec(i + 1)

    rec(0)
    return out


def refine_profiles(n: int, prof: ResidueProfile, s: SumProfile, kind: Kind,
                    project: Optional[str] = None):
    """Refine a profile at modulus m to all compatible ones at 2m.

    Merging classes i and i+m of any output reproduces the input, and
    each output satisfies the full constraint set at 2m.  ``project``
    selects what to return: None for full profiles, "pq" for the unique
    (C, D) halves that admit at least one (A, B) half, "kr" for the
    mirror image of that.
    """
    m = prof.modulus
    m2 = 2 * m
    if kind is Kind.NNS and m2 % 2 != 0:
        raise PreconditionError("near-normal refinement requires even target modulus")
    _check_parent(n, prof, s)
    sizes_ab = class_sizes(n + 1, m2)
    sizes_cd = class_sizes(n, m2)

    k_fine = _filter_fine(_splits(prof.a_class_sums, sizes_ab, m), s.a_alt)
    if kind is Kind.BS:
        r_fine = _filter_fine(_splits(prof.b_class_sums, sizes_ab, m), s.b_alt)
        kr = [(k, r) for k in k_fine for r in r_fine
              if _pairs_congruent(k, r, n, m2, n + 2, end_correction=True)]
    else:
        kr = []
        for k in k_fine:
            r = _derive_partner_sums(k, n, m2, kind)
            if not _vector_fits(r, sizes_ab):
                continue
            if _merge(r, m) != prof.b_class_sums or _vector_alt_sum(r) != s.b_alt:
                continue
            if _pairs_congruent(k, r, n, m2, n + 2, end_correction=True):
                kr.append((k, r))
    p_fine = _filter_fine(_splits(prof.c_class_sums, sizes_cd, m), s.c_alt)
    q_fine = _filter_fine(_splits(prof.d_class_sums, sizes_cd, m), s.d_alt)
    pq = [(p, q) for p in p_fine for q in q_fine
          if _pairs_congruent(p, q, n, m2, n + 1, end_correction=False)]

    target = _join_target(n, m2)
    kr_sigs = [(k, r, _add_sigs(k, r, m2)) for k, r in kr]
    pq_sigs = [(p, q, _add_sigs(p, q, m2)) for p, q in pq]

    if project == "pq":
        have = {sig for _, _, sig in kr_sigs}
        keep = sorted({(p, q) for p, q, sig in pq_sigs
                       if tuple(t - x for t, x in zip(target, sig)) in have})
        return keep
    if project == "kr":
        have = {sig for _, _, sig in pq_sigs}
        keep = sorted({(k, r) for k, r, sig in kr_sigs
                       if tuple(t - x for t, x in zip(target, sig)) in have})
        return keep
    if project is not None:
        raise PreconditionError("project must be None, 'pq' or 'kr'")

    by_sig: dict[tuple[int, ...], list[tuple]] = {}
    for p, q, sig in pq_sigs:
        by_sig.setdefault(sig, []).append((p, q))
    out = []
    for k, r, sig in kr_sigs:
        need = tuple(t - x for t, x in zip(target, sig))
        for p, q in by_sig.get(need, ()):
            out.append(ResidueProfile(m2, k, r, p, q))
    out.sort(key=ResidueProfile.as_flat)
    return out


def _merge(v: tuple[int, ...], m: int) -> tuple[int, ...]:
    return tuple(v[i] + v[i + m] for i in range(m))


def _filter_fine(fines: list[tuple[int, ...]], alt_total: int) -> list[tuple[int, ...]]:
    return [v for v in fines if _vector_alt_sum(v) == alt_total]
