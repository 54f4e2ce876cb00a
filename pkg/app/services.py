"""
Service layer: runs commands on parsed instances, checks the identities that tie
interior polynomials to dijoins, feedback arc sets, parking functions and greedoids,
and stores reports.
"""

import hashlib
import json
import logging
import random
import time
from itertools import combinations
from typing import Any, Callable, Iterable, List, Optional

import networkx as nx
from sqlmodel import select, desc

from app.algebra import Polynomial
from app.catalog import (
    bipartite_multigraphs,
    connected_digraphs,
    digraph_family,
    eulerian_digraphs,
    random_tu_matrix,
    rooted_family,
)
from app.database import create_tables, get_session
from app.digraph import (
    DiGraph,
    UGraph,
    bridges,
    connectivity_flags,
    enumerate_directed_cuts,
    enumerate_signed_cycles,
    enumerate_spanning_arborescences,
    find_layering,
    is_acyclic,
    is_two_edge_connected,
    require_weakly_connected,
    standard_orientation,
)
from app.dijoin import (
    is_long_arc_dijoin,
    max_disjoint_directed_cuts,
    min_dijoins,
    min_reversals_to_strong,
    minfas,
    minfas_rooted,
)
from app.errors import AlgebraError, CheckFailure, InputError, PolytopeError, TooLargeError
from app.greedoid import (
    BranchingGreedoid,
    external_activity,
    greedoid_polynomial,
    lexmin_feasible_word,
    min_restriction_k,
    semi_active_edges,
    semi_activity_discrepancies,
    semi_activity_polynomial,
)
from app.instances import InstanceFile, InstanceKind, digest
from app.matroid import (
    OrientedRegularMatroid,
    classify_matroid_facets,
    dual_matroid,
    graphic_matroid,
    is_co_eulerian,
    is_totally_unimodular,
    matroid_interior_polynomial,
    matroid_min_dijoins,
    orthogonality_violations,
    scramble,
    signed_circuits,
    signed_cocircuits,
)
from app.models import CheckOutcome, CheckStatus, CommandOptions, Report, RunSummary, VerificationRun
from app.parking import (
    chan_transform,
    eulerian_duality_check,
    parking_enumerator,
    parking_functions,
    reachable_part,
    reduced_greedoid_polynomial,
)
from app.polytope import (
    CountMode,
    classify_facets,
    first_interior_dilate,
    forest_lattice_count,
    hstar,
    interior_points,
    lattice_count,
    normalized_volume,
    polytope_of,
    root_polytope_hstar,
)

logger = logging.getLogger(__name__)

ORIENT_SCAN_MAX_EDGES = 14
TU_SWEEP_MATRICES = 20


def outcome(name: str, statement: str, ok: bool, detail: Optional[str] = None) -> CheckOutcome:
    return CheckOutcome(name=name, statement=statement, status=CheckStatus.PASS if ok else CheckStatus.FAIL, detail=detail)


def skipped(name: str, statement: str, reason: str) -> CheckOutcome:
    return CheckOutcome(name=name, statement=statement, status=CheckStatus.SKIP, detail=reason)


def guarded(name: str, statement: str, check: Callable[[], tuple[bool, Optional[str]]]) -> CheckOutcome:
    """Run a check; a CheckFailure raised inside becomes a FAIL outcome."""
    try:
        ok, detail = check()
    except CheckFailure as e:
        logger.warning(f"check {name} raised: {e}")
        return outcome(name, statement, False, str(e))
    except TooLargeError as e:
        logger.info(f"check {name} skipped: {e}")
        return skipped(name, statement, str(e))
    return outcome(name, statement, ok, detail)


def _poly(p: Polynomial) -> List[int]:
    return p.as_list()


class DigraphChecks:
    """Identities checked on a single weakly connected digraph."""

    @staticmethod
    def interior(G: DiGraph, max_edges: Optional[int] = None) -> tuple[dict[str, Any], List[CheckOutcome]]:
        """Degree, leading coefficient, interior points and polytope consistency."""
        P = polytope_of(G)
        interior = hstar(P)
        certificate = min_dijoins(G, max_edges=max_edges)
        packing = max_disjoint_directed_cuts(G, max_edges=max_edges)
        values: dict[str, Any] = {
            "interior_polynomial": _poly(interior),
            "nu": certificate.nu,
            "min_dijoin_count": len(certificate.min_dijoins),
            "net_degree_vectors": [list(v) for v in certificate.net_degree_vectors],
            "max_disjoint_directed_cuts": packing.size,
        }
        checks = [
            outcome(
                "degree_is_vertices_minus_one_minus_nu",
                "deg I_G = |V| - 1 - nu(G)",
                interior.degree == G.n - 1 - certificate.nu,
                f"degree {interior.degree}, |V| = {G.n}, nu = {certificate.nu}",
            ),
            outcome(
                "leading_coefficient_counts_net_degree_vectors",
                "leading coefficient of I_G = number of distinct net degree vectors of minimum dijoins",
                interior.leading_coefficient == len(certificate.net_degree_vectors),
                f"{interior.leading_coefficient} vs {len(certificate.net_degree_vectors)}",
            ),
            outcome(
                "interior_points_are_net_degree_vectors",
                "interior lattice points of (nu+1) times the polytope = net degree vectors of minimum dijoins",
                interior_points(P, certificate.nu + 1) == [tuple(v) for v in certificate.net_degree_vectors],
            ),
            outcome(
                "lucchesi_younger_packing",
                "nu(G) = maximum number of edge-disjoint directed cuts",
                packing.size == certificate.nu,
                f"packing {packing.size}, nu {certificate.nu}",
            ),
            outcome(
                "minimum_dijoins_are_not_long_arc",
                "no minimum dijoin contains the longer side of a signed cycle",
                not any(is_long_arc_dijoin(G, K) for K in certificate.min_dijoins),
            ),
        ]
        checks.extend(PolytopeChecks.consistency(P, interior))
        distinct = len({g for g in P.generators if any(g)})
        checks.append(
            outcome(
                "linear_coefficient_counts_generators",
                "h*_1 = number of distinct nonzero generators - dimension",
                interior.coefficient(1) == distinct - P.dim,
                f"h*_1 = {interior.coefficient(1)}, {distinct} generators, dimension {P.dim}",
            )
        )
        flags = connectivity_flags(G, 0)
        if flags.strongly_connected:
            checks.append(
                outcome(
                    "strongly_connected_is_palindromic",
                    "strongly connected: I_G palindromic of degree |V| - 1",
                    interior.is_palindromic() and interior.degree == G.n - 1,
                    f"{_poly(interior)}",
                )
            )
        if all(not G.is_loop(i) for i in range(G.m)) and G.m == G.n - 1:
            counts = [lattice_count(P, k) for k in range(4)]
            checks.append(
                outcome(
                    "forest_counts_closed_form",
                    "tree: lattice points of k times the polytope = C(k + |E|, |E|)",
                    counts == [forest_lattice_count(G.m, k) for k in range(4)],
                    f"counts {counts}",
                )
            )
        cuts = enumerate_directed_cuts(G)
        checks.append(
            outcome(
                "no_directed_cut_iff_strong",
                "no directed cut exists iff the digraph is strongly connected",
                (not cuts) == flags.strongly_connected,
            )
        )
        cycles = enumerate_signed_cycles(G)
        checks.append(
            outcome(
                "layering_iff_balanced_cycles",
                "a layering exists iff every signed cycle has equally many edges each way",
                (find_layering(G) is not None) == all(c.is_balanced for c in cycles),
            )
        )
        checks.append(
            guarded(
                "facets_are_cuts_and_layerings",
                "facets through 0 match elementary directed cuts, the others admissible layerings",
                lambda: (classify_facets(P, G) is not None, None),
            )
        )
        checks.append(
            outcome(
                "graphic_matroid_agrees",
                "interior polynomial of the graphic matroid = I_G",
                matroid_interior_polynomial(graphic_matroid(G), check=False) == interior,
            )
        )
        if is_two_edge_connected(G):
            reversals = min_reversals_to_strong(G, max_edges=max_edges)
            checks.append(
                outcome(
                    "nu_is_min_reversals",
                    "2-edge-connected: nu(G) = fewest reversals giving a strongly connected orientation",
                    reversals == certificate.nu,
                    f"reversals {reversals}, nu {certificate.nu}",
                )
            )
        layering = find_layering(G)
        if layering is not None and G.n > 1 and max(layering.values) - min(layering.values) == 1:
            low = sum(1 for v in layering.values if v == min(layering.values))
            high = G.n - low
            degree = interior.degree
            assert degree is not None
            degree_gap = min(low, high) - 1 - degree
            nu_gap = certificate.nu - max(low, high)
            checks.append(
                outcome(
                    "bipartite_inequalities_with_equal_defects",
                    "bipartite U->W: deg I_G <= min(|U|,|W|) - 1 and nu >= max(|U|,|W|), equal defects",
                    degree_gap >= 0 and nu_gap >= 0 and degree_gap == nu_gap,
                    f"defects {degree_gap} and {nu_gap}",
                )
            )
        return values, checks

    @staticmethod
    def rooted(
        G: DiGraph, s: int, order: Optional[List[int]] = None, seed: int = 0, max_edges: Optional[int] = None
    ) -> tuple[dict[str, Any], List[CheckOutcome]]:
        """Parking functions, greedoid polynomial and rooted feedback arc sets at root s."""
        park = parking_enumerator(G, s)
        X = BranchingGreedoid(G, s)
        lam = greedoid_polynomial(X, order, check_orders=0)
        rooted = minfas_rooted(G, s, max_edges=max_edges)
        plain = minfas(G, max_edges=max_edges)
        genus = G.m - G.n + 1
        values: dict[str, Any] = {
            "root": s,
            "parking_enumerator": _poly(park),
            "greedoid_polynomial": _poly(lam),
            "minfas": plain.size,
            "minfas_rooted": rooted.size,
        }
        arborescences = enumerate_spanning_arborescences(G, s)
        checks = [
            guarded(
                "chan_identity",
                "lambda(x) = x^(|E|-|V|+1) park(1/x)",
                lambda: (chan_transform(G, s, check=False) == lam, f"park {_poly(park)}, lambda {_poly(lam)}"),
            ),
            guarded(
                "greedoid_polynomial_order_independent",
                "lambda does not depend on the edge order (3 seeded random orders)",
                lambda: (greedoid_polynomial(X, order, check_orders=3, seed=seed) == lam, None),
            ),
            outcome(
                "rooted_degree_is_genus_minus_rooted_minfas",
                "deg park = |E| - |V| + 1 - minfas(G, s)",
                park.degree == genus - rooted.size,
                f"degree {park.degree}, genus {genus}, rooted minfas {rooted.size}",
            ),
            outcome(
                "lowest_exponent_is_rooted_minfas",
                "lowest exponent of lambda = minfas(G, s)",
                lam.lowest_exponent() == rooted.size,
                f"{lam.lowest_exponent()} vs {rooted.size}",
            ),
            guarded(
                "restriction_matches_lowest_exponent",
                "fewest deletions keeping the rank and giving a constant term = lowest exponent of lambda",
                lambda: (min_restriction_k(X, order) == lam.lowest_exponent(), None),
            ),
            outcome(
                "constant_term_iff_acyclic",
                "lambda(0) != 0 iff the digraph is acyclic",
                (lam.coefficient(0) != 0) == is_acyclic(G),
            ),
            outcome(
                "park_counts_arborescences",
                "park(1) = number of spanning arborescences rooted at s",
                park(1) == len(arborescences) == lam(1),
                f"park(1) = {park(1)}, {len(arborescences)} arborescences",
            ),
            outcome("rooted_minfas_at_least_minfas", "minfas(G, s) >= minfas(G)", rooted.size >= plain.size),
            outcome(
                "semi_activity_polynomial_is_lambda",
                "sum over arborescences of t^(semi-active edges) = lambda",
                semi_activity_polynomial(G, s, order) == lam,
            ),
        ]
        discrepancies = semi_activity_discrepancies(G, s, order)
        checks.append(
            CheckOutcome(
                name="semi_activity_per_arborescence",
                statement="semi-active and greedoid-active edge sets per arborescence",
                status=CheckStatus.NOTE,
                detail=f"{len(discrepancies)} of {len(arborescences)} arborescences differ",
            )
        )
        return values, checks

    @staticmethod
    def reachable_reduction(G: DiGraph, s: int, lam: Polynomial) -> CheckOutcome:
        """Compare lambda at a root that misses some vertices with the reachable part's polynomial."""
        part = reachable_part(G, s)
        reduced = reduced_greedoid_polynomial(G, s)
        return outcome(
            "unreachable_edges_are_active",
            "root not reaching every vertex: lambda = x^(|E|-|E'|) times lambda of the reachable part",
            lam == reduced,
            f"lambda {_poly(lam)}, {G.m - part.m} edges outside the reachable part, reduced {_poly(reduced)}",
        )

    @staticmethod
    def eulerian(
        G: DiGraph, s: int = 0, max_edges: Optional[int] = None
    ) -> tuple[dict[str, Any], List[CheckOutcome]]:
        """Root independence and the dual-matroid comparison on connected Eulerian digraphs."""
        report = eulerian_duality_check(G, s)
        plain = minfas(G, max_edges=max_edges)
        park = report.park
        genus = G.m - G.n + 1
        rooted_sizes = [minfas_rooted(G, root, max_edges=max_edges).size for root in range(G.n)]
        values = {"dual_interior_polynomial": _poly(report.dual_interior), "eulerian_root_park": _poly(park)}
        checks = [
            outcome(
                "eulerian_degree_is_genus_minus_minfas",
                "Eulerian: deg park = |E| - |V| + 1 - minfas(G)",
                park.degree == genus - plain.size,
                f"degree {park.degree}, genus {genus}, minfas {plain.size}",
            ),
            outcome(
                "eulerian_park_is_root_independent",
                "Eulerian: park does not depend on the root",
                report.root_independent,
                f"{[_poly(p) for p in report.park_by_root]}",
            ),
            outcome(
                "eulerian_park_is_dual_interior",
                "Eulerian: park = interior polynomial of the dual matroid",
                report.equal,
                f"park {_poly(park)}, dual {_poly(report.dual_interior)}",
            ),
            outcome(
                "eulerian_rooted_minfas_is_minfas",
                "Eulerian: minfas(G, s) = minfas(G) for every root",
                all(size == plain.size for size in rooted_sizes),
                f"rooted {rooted_sizes}, plain {plain.size}",
            ),
        ]
        return values, checks


class PolytopeChecks:
    @staticmethod
    def consistency(P, interior: Polynomial) -> List[CheckOutcome]:
        """Beck-Robbins degree, interior count at the first interior dilate and the volume."""
        if P.dim == 0:
            return [skipped("beck_robbins_degree", "deg h* = d + 1 - first interior dilate", "point polytope")]
        k = first_interior_dilate(P)
        inside = lattice_count(P, k, CountMode.INTERIOR)
        volume = normalized_volume(P)
        return [
            outcome(
                "beck_robbins_degree",
                "deg h* = d + 1 - first interior dilate",
                interior.degree == P.dim + 1 - k,
                f"degree {interior.degree}, d = {P.dim}, first interior dilate {k}",
            ),
            outcome(
                "leading_coefficient_counts_first_interior_points",
                "leading coefficient of h* = interior lattice points of the first interior dilate",
                interior.leading_coefficient == inside,
                f"{interior.leading_coefficient} vs {inside}",
            ),
            outcome(
                "volume_is_hstar_at_one",
                "h*(1) = normalized volume from a simplicial decomposition",
                interior(1) == volume,
                f"h*(1) = {interior(1)}, volume {volume}",
            ),
        ]


class MatroidChecks:
    @staticmethod
    def matroid(
        M: OrientedRegularMatroid, seed: int = 0, max_edges: Optional[int] = None, scrambles: int = 5
    ) -> tuple[dict[str, Any], List[CheckOutcome]]:
        """Dijoin identities, orthogonality, facets, duality and representation invariance."""
        interior = matroid_interior_polynomial(M, check=False)
        certificate = matroid_min_dijoins(M, max_edges=max_edges)
        co_eulerian = is_co_eulerian(M)
        values: dict[str, Any] = {
            "rank": M.rank,
            "interior_polynomial": _poly(interior),
            "nu": certificate.nu,
            "min_dijoin_sums": [list(v) for v in certificate.net_degree_vectors],
            "co_eulerian": co_eulerian,
        }
        checks = [
            outcome(
                "matroid_degree_is_rank_minus_nu",
                "deg I_M = r - nu(M)",
                interior.degree == M.rank - certificate.nu,
                f"degree {interior.degree}, rank {M.rank}, nu {certificate.nu}",
            ),
            outcome(
                "matroid_leading_coefficient_counts_dijoin_sums",
                "leading coefficient of I_M = distinct column sums of minimum dijoins",
                interior.leading_coefficient == len(certificate.net_degree_vectors),
            ),
            outcome(
                "circuits_orthogonal_to_cocircuits",
                "meeting signed circuits and cocircuits agree and disagree somewhere",
                not orthogonality_violations(M),
            ),
        ]
        checks.extend(PolytopeChecks.consistency(M.polytope(), interior))
        facet_report = classify_matroid_facets(M)
        checks.append(
            CheckOutcome(
                name="matroid_facets_are_cocircuits_and_functionals",
                statement="facets through 0 match directed cocircuits, the others have l . a_i <= 1",
                status=CheckStatus.PASS if facet_report.ok else (CheckStatus.FAIL if co_eulerian else CheckStatus.NOTE),
                detail="; ".join(facet_report.problems) or None,
            )
        )
        dual = dual_matroid(M)
        circuits = {c.vector for c in signed_circuits(M)}
        cocircuits = {c.vector for c in signed_cocircuits(M)}
        checks.append(
            outcome(
                "dual_swaps_circuits_and_cocircuits",
                "signed circuits of the dual = signed cocircuits and vice versa",
                {c.vector for c in signed_circuits(dual)} == cocircuits
                and {c.vector for c in signed_cocircuits(dual)} == circuits,
            )
        )
        checks.append(
            outcome(
                "dual_is_involution",
                "the dual of the dual has the original signed circuits",
                {c.vector for c in signed_circuits(dual_matroid(dual))} == circuits,
            )
        )
        rng = random.Random(seed)
        scrambled = [matroid_interior_polynomial(scramble(M, rng), check=False) for _ in range(scrambles)]
        checks.append(
            outcome(
                "representation_invariance",
                "I_M is unchanged by unit pivots, row operations and column permutations",
                all(p == interior for p in scrambled),
                f"{[_poly(p) for p in scrambled]}",
            )
        )
        return values, checks


class CommandService:
    """Runs one subcommand on one parsed instance."""

    @staticmethod
    def digraph_of(instance: InstanceFile, command: str) -> DiGraph:
        if instance.digraph is None:
            raise InputError(f"command '{command}' needs a digraph instance, got {instance.kind}", "KIND_MISMATCH")
        return instance.digraph

    @staticmethod
    def matroid_of(instance: InstanceFile, options: CommandOptions) -> OrientedRegularMatroid:
        match instance.kind:
            case InstanceKind.MATRIX:
                rows = instance.matrix or ()
                if not rows:
                    return OrientedRegularMatroid((), instance.columns)
                return OrientedRegularMatroid.from_rows(rows, trust=options.trust_tu)
            case InstanceKind.DIGRAPH:
                assert instance.digraph is not None
                return graphic_matroid(instance.digraph)
            case _:
                raise InputError("matroid commands need a matrix or digraph instance", "KIND_MISMATCH")

    @staticmethod
    def require_root(G: DiGraph, options: CommandOptions, command: str) -> int:
        if options.root is None:
            raise InputError(f"command '{command}' needs --root", "PARSE_ERROR")
        if not 0 <= options.root < G.n:
            raise InputError(f"root {options.root} outside 0..{G.n - 1}", "RANGE_ERROR")
        return options.root

    @staticmethod
    def run(command: str, instance: InstanceFile, options: Optional[CommandOptions] = None) -> Report:
        """Dispatch ``command``; module errors propagate to the caller."""
        options = options or CommandOptions()
        started = time.perf_counter()
        match command:
            case "interior":
                values, checks = CommandService.interior(CommandService.digraph_of(instance, command))
            case "dijoin":
                values, checks = CommandService.dijoin(CommandService.digraph_of(instance, command), options)
            case "minfas":
                values, checks = CommandService.minfas(CommandService.digraph_of(instance, command), options)
            case "parking":
                values, checks = CommandService.parking(CommandService.digraph_of(instance, command), options)
            case "greedoid":
                values, checks = CommandService.greedoid(CommandService.digraph_of(instance, command), options)
            case "matroid-interior":
                values, checks = CommandService.matroid_interior(CommandService.matroid_of(instance, options), options)
            case "dual":
                values, checks = CommandService.dual(CommandService.matroid_of(instance, options))
            case "facets":
                values, checks = CommandService.facets(instance, options)
            case "orient-scan":
                values, checks = OrientationScanService.scan(CommandService.ugraph_of(instance))
            case "verify":
                values, checks = VerificationService.verify(instance, options)
            case _:
                raise InputError(f"unknown command '{command}'", "PARSE_ERROR")
        elapsed = time.perf_counter() - started
        logger.info(f"{command} finished in {elapsed:.3f} s with {len(checks)} checks")
        return Report(
            command=command,
            instance_digest=digest(instance),
            instance_kind=instance.kind.value,
            values=values,
            checks=checks,
            wall_time=elapsed,
        )

    @staticmethod
    def ugraph_of(instance: InstanceFile) -> UGraph:
        if instance.ugraph is not None:
            return instance.ugraph
        if instance.digraph is not None:
            return instance.digraph.underlying()
        raise InputError("orient-scan needs a ugraph or digraph instance", "KIND_MISMATCH")

    @staticmethod
    def interior(G: DiGraph) -> tuple[dict[str, Any], List[CheckOutcome]]:
        require_weakly_connected(G)
        P = polytope_of(G)
        interior = hstar(P)
        values: dict[str, Any] = {
            "interior_polynomial": _poly(interior),
            "interior_polynomial_text": str(interior),
            "dimension": P.dim,
        }
        if P.dim > 0:
            values["first_interior_dilate"] = first_interior_dilate(P)
        if G.m > 0:
            try:
                values["root_polytope_hstar"] = _poly(root_polytope_hstar(G))
            except (PolytopeError, AlgebraError) as e:
                logger.info(f"root polytope without the origin not reported: {e}")
        return values, PolytopeChecks.consistency(P, interior)

    @staticmethod
    def dijoin(G: DiGraph, options: CommandOptions) -> tuple[dict[str, Any], List[CheckOutcome]]:
        certificate = min_dijoins(G, max_edges=options.max_edges)
        packing = max_disjoint_directed_cuts(G, max_edges=options.max_edges)
        values = {
            "nu": certificate.nu,
            "min_dijoins": [list(K) for K in certificate.min_dijoins],
            "net_degree_vectors": [list(v) for v in certificate.net_degree_vectors],
            "max_disjoint_directed_cuts": packing.size,
            "cut_packing": [list(cut.edges) for cut in packing.cuts],
        }
        checks = [
            outcome(
                "lucchesi_younger_packing",
                "nu(G) = maximum number of edge-disjoint directed cuts",
                packing.size == certificate.nu,
            )
        ]
        return values, checks

    @staticmethod
    def minfas(G: DiGraph, options: CommandOptions) -> tuple[dict[str, Any], List[CheckOutcome]]:
        plain = minfas(G, max_edges=options.max_edges)
        values: dict[str, Any] = {"minfas": plain.size, "witness": list(plain.witness)}
        checks: List[CheckOutcome] = []
        if options.root is not None:
            s = CommandService.require_root(G, options, "minfas")
            rooted = minfas_rooted(G, s, max_edges=options.max_edges)
            values.update({"root": s, "minfas_rooted": rooted.size, "rooted_witness": list(rooted.witness)})
            checks.append(outcome("rooted_minfas_at_least_minfas", "minfas(G, s) >= minfas(G)", rooted.size >= plain.size))
        return values, checks

    @staticmethod
    def parking(G: DiGraph, options: CommandOptions) -> tuple[dict[str, Any], List[CheckOutcome]]:
        s = CommandService.require_root(G, options, "parking")
        park = parking_enumerator(G, s)
        values: dict[str, Any] = {
            "root": s,
            "parking_enumerator": _poly(park),
            "parking_functions": [[p[v] for v in sorted(p)] for p in parking_functions(G, s)],
        }
        checks: List[CheckOutcome] = []
        if connectivity_flags(G, s).s_root_connected:
            lam = greedoid_polynomial(BranchingGreedoid(G, s), check_orders=0)
            values["greedoid_polynomial"] = _poly(lam)
            checks.append(
                guarded(
                    "chan_identity",
                    "lambda(x) = x^(|E|-|V|+1) park(1/x)",
                    lambda: (chan_transform(G, s, check=False) == lam, None),
                )
            )
        return values, checks

    @staticmethod
    def greedoid(G: DiGraph, options: CommandOptions) -> tuple[dict[str, Any], List[CheckOutcome]]:
        s = CommandService.require_root(G, options, "greedoid")
        X = BranchingGreedoid(G, s)
        order = options.order
        lam = greedoid_polynomial(X, order, check_orders=3, seed=options.seed)
        bases = []
        spanning = connectivity_flags(G, s).s_root_connected
        for B in X.bases:
            activity = external_activity(X, B, order)
            entry: dict[str, Any] = {
                "basis": sorted(B),
                "word": list(lexmin_feasible_word(X, B, order)),
                "active": list(activity.active),
            }
            if spanning:
                entry["semi_active"] = list(semi_active_edges(G, s, B, order))
            bases.append(entry)
        values = {"root": s, "order": order or list(range(G.m)), "greedoid_polynomial": _poly(lam), "bases": bases}
        checks: List[CheckOutcome] = []
        if spanning:
            checks.append(
                outcome(
                    "semi_activity_polynomial_is_lambda",
                    "sum over arborescences of t^(semi-active edges) = lambda",
                    semi_activity_polynomial(G, s, order) == lam,
                )
            )
        else:
            checks.append(DigraphChecks.reachable_reduction(G, s, lam))
        return values, checks

    @staticmethod
    def matroid_interior(
        M: OrientedRegularMatroid, options: CommandOptions
    ) -> tuple[dict[str, Any], List[CheckOutcome]]:
        interior = matroid_interior_polynomial(M, check=False)
        certificate = matroid_min_dijoins(M, max_edges=options.max_edges)
        values = {
            "rank": M.rank,
            "interior_polynomial": _poly(interior),
            "nu": certificate.nu,
            "min_dijoin_sums": [list(v) for v in certificate.net_degree_vectors],
        }
        checks = [
            outcome("matroid_degree_is_rank_minus_nu", "deg I_M = r - nu(M)", interior.degree == M.rank - certificate.nu),
            outcome(
                "matroid_leading_coefficient_counts_dijoin_sums",
                "leading coefficient of I_M = distinct column sums of minimum dijoins",
                interior.leading_coefficient == len(certificate.net_degree_vectors),
            ),
        ]
        return values, checks

    @staticmethod
    def dual(M: OrientedRegularMatroid) -> tuple[dict[str, Any], List[CheckOutcome]]:
        dual = dual_matroid(M)
        values = {"rank": dual.rank, "matrix": [list(row) for row in dual.matrix]}
        checks = [
            outcome(
                "dual_circuits_are_cocircuits",
                "signed circuits of the dual = signed cocircuits of the matroid",
                {c.vector for c in signed_circuits(dual)} == {c.vector for c in signed_cocircuits(M)},
            )
        ]
        return values, checks

    @staticmethod
    def facets(instance: InstanceFile, options: CommandOptions) -> tuple[dict[str, Any], List[CheckOutcome]]:
        if instance.kind == InstanceKind.DIGRAPH:
            G = CommandService.digraph_of(instance, "facets")
            require_weakly_connected(G)
            P = polytope_of(G)
            checks = [
                guarded(
                    "facets_are_cuts_and_layerings",
                    "facets through 0 match elementary directed cuts, the others admissible layerings",
                    lambda: (classify_facets(P, G) is not None, None),
                )
            ]
        else:
            M = CommandService.matroid_of(instance, options)
            P = M.polytope()
            report = classify_matroid_facets(M)
            status = CheckStatus.PASS if report.ok else (CheckStatus.FAIL if is_co_eulerian(M) else CheckStatus.NOTE)
            checks = [
                CheckOutcome(
                    name="matroid_facets_are_cocircuits_and_functionals",
                    statement="facets through 0 match directed cocircuits, the others have l . a_i <= 1",
                    status=status,
                    detail="; ".join(report.problems) or None,
                )
            ]
        values = {
            "dimension": P.dim,
            "facets": [
                {"normal": list(f.normal), "offset": f.offset, "kind": f.kind.value} for f in P.facet_list
            ],
        }
        return values, checks


class VerificationService:
    """Every applicable identity on one instance."""

    @staticmethod
    def verify(instance: InstanceFile, options: CommandOptions) -> tuple[dict[str, Any], List[CheckOutcome]]:
        match instance.kind:
            case InstanceKind.DIGRAPH:
                assert instance.digraph is not None
                return VerificationService.verify_digraph(instance.digraph, options)
            case InstanceKind.MATRIX:
                M = CommandService.matroid_of(instance, options)
                values, checks = MatroidChecks.matroid(M, options.seed, options.max_edges)
                if not options.trust_tu and M.matrix:
                    checks.insert(
                        0, outcome("totally_unimodular", "every square subdeterminant is 0 or +-1", is_totally_unimodular(M.matrix).ok)
                    )
                return values, checks
            case _:
                assert instance.ugraph is not None
                return OrientationScanService.scan(instance.ugraph)

    @staticmethod
    def verify_digraph(G: DiGraph, options: CommandOptions) -> tuple[dict[str, Any], List[CheckOutcome]]:
        require_weakly_connected(G)
        roots = list(range(G.n))
        if options.root is not None:
            roots = [CommandService.require_root(G, options, "verify")]
        values, checks = DigraphChecks.interior(G, options.max_edges)
        root = next((s for s in roots if connectivity_flags(G, s).s_root_connected), None)
        if root is None:
            checks.append(
                skipped("rooted_identities", "parking, greedoid and rooted feedback identities", "no root reaches every vertex")
            )
            s = options.root if options.root is not None else 0
            lam = greedoid_polynomial(BranchingGreedoid(G, s), check_orders=0)
            values.update({"root": s, "greedoid_polynomial": _poly(lam)})
            checks.append(DigraphChecks.reachable_reduction(G, s, lam))
        else:
            rooted_values, rooted_checks = DigraphChecks.rooted(G, root, options.order, options.seed, options.max_edges)
            values.update(rooted_values)
            checks.extend(rooted_checks)
        if connectivity_flags(G, 0).eulerian:
            eulerian_values, eulerian_checks = DigraphChecks.eulerian(G, options.root or 0, options.max_edges)
            values.update(eulerian_values)
            checks.extend(eulerian_checks)
        else:
            connected_roots = [s for s in range(G.n) if connectivity_flags(G, s).s_root_connected]
            enumerators = {tuple(parking_enumerator(G, s).as_list()) for s in connected_roots}
            if len(connected_roots) > 1:
                checks.append(
                    CheckOutcome(
                        name="park_root_dependence",
                        statement="not Eulerian: park may depend on the root",
                        status=CheckStatus.NOTE,
                        detail=f"{len(enumerators)} distinct enumerators over {len(connected_roots)} roots",
                    )
                )
        return values, checks


class OrientationScanService:
    """Interior polynomials over all orientations of an undirected multigraph."""

    @staticmethod
    def scan(U: UGraph, max_edges: int = ORIENT_SCAN_MAX_EDGES) -> tuple[dict[str, Any], List[CheckOutcome]]:
        if U.m > max_edges:
            raise TooLargeError(f"orientation scan over {U.m} edges exceeds the limit of {max_edges}")
        base = DiGraph(U.n, U.edges)
        require_weakly_connected(base)
        full = (1 << U.m) - 1
        by_bits: dict[int, Polynomial] = {}
        for bits in range(1 << U.m):
            if U.m and not bits & 1:
                continue
            poly = hstar(polytope_of(U.orient(bits)))
            by_bits[bits] = poly
            by_bits[bits ^ full] = poly
        cut_edges = bridges(base)
        blocks = base.without(cut_edges)
        block_count = nx.number_weakly_connected_components(blocks.to_networkx())

        def strong_blocks(bits: int) -> bool:
            oriented = U.orient(bits).without(cut_edges)
            return nx.number_strongly_connected_components(oriented.to_networkx()) == block_count

        degrees: dict[int, int] = {}
        for bits, poly in by_bits.items():
            degree = poly.degree
            assert degree is not None
            degrees[bits] = degree
        low, high = min(degrees.values()), max(degrees.values())
        distinct = sorted(set(by_bits.values()), key=lambda p: p.coeffs)
        incomparable = sum(1 for p, q in combinations(distinct, 2) if not p.comparable_with(q))
        values: dict[str, Any] = {
            "orientations": len(by_bits),
            "distinct_polynomials": [
                {"coeffs": _poly(p), "count": sum(1 for q in by_bits.values() if q == p)} for p in distinct
            ],
            "min_degree": low,
            "max_degree": high,
            "min_degree_orientations": sorted(b for b, d in degrees.items() if d == low),
            "max_degree_orientations": sorted(b for b, d in degrees.items() if d == high),
            "incomparable_pairs": incomparable,
            "coefficientwise_minimum": any(all(p.dominated_by(q) for q in distinct) for p in distinct),
            "coefficientwise_maximum": any(all(q.dominated_by(p) for q in distinct) for p in distinct),
        }
        checks = []
        standard = standard_orientation(U)
        if standard is not None:
            standard_degree = hstar(polytope_of(standard)).degree
            checks.append(
                outcome(
                    "standard_orientation_minimizes_degree",
                    "bipartite: the standard orientation has the minimum interior polynomial degree",
                    standard_degree == low,
                    f"standard degree {standard_degree}, minimum {low}",
                )
            )
        expected = U.n - 1 - len(cut_edges)
        attainers = {bits for bits, d in degrees.items() if d == high}
        strong = {bits for bits in by_bits if strong_blocks(bits)}
        checks.append(
            outcome(
                "maximum_degree_by_strong_blocks",
                "maximum degree = |V| - 1 - #bridges, attained exactly when every 2-edge-connected block is strong",
                high == expected and attainers == strong,
                f"maximum {high}, expected {expected}, {len(attainers)} attainers, {len(strong)} strong-block orientations",
            )
        )
        return values, checks


class SweepService:
    """Identity checks over instance families."""

    FAMILIES = ("interior", "facets", "matroid", "eulerian", "rooted", "bipartite")

    @staticmethod
    def _collect(name: str, statement: str, items: Iterable[Any], check: Callable[[Any], Optional[str]]) -> CheckOutcome:
        """``check`` returns None on success or a failure description."""
        total = 0
        failures = []
        for item in items:
            total += 1
            problem = check(item)
            if problem is not None:
                failures.append(problem)
        detail = f"{total - len(failures)}/{total} instances pass"
        if failures:
            detail += f"; first failure: {failures[0]}"
            logger.warning(f"sweep {name}: {len(failures)} failures")
        return outcome(name, statement, not failures, detail)

    @staticmethod
    def _failed(checks: Iterable[CheckOutcome], label: str) -> Optional[str]:
        bad = [c.name for c in checks if c.status == CheckStatus.FAIL]
        return f"{label}: {', '.join(bad)}" if bad else None

    @staticmethod
    def run(family: str, limit: Optional[int] = None, seed: int = 0) -> Report:
        started = time.perf_counter()
        values, checks = SweepService.sweep(family, limit, seed)
        elapsed = time.perf_counter() - started
        logger.info(f"sweep {family} finished in {elapsed:.3f} s")
        label = hashlib.sha256(f"{family}:{limit}:{seed}".encode()).hexdigest()
        return Report(
            command="sweep", instance_digest=label, instance_kind="family", values=values, checks=checks, wall_time=elapsed
        )

    @staticmethod
    def sweep(family: str, limit: Optional[int] = None, seed: int = 0) -> tuple[dict[str, Any], List[CheckOutcome]]:
        match family:
            case "interior":
                graphs = digraph_family(limit)
                check = SweepService._collect(
                    "interior_identities",
                    "degree, leading coefficient, interior points and polytope consistency on every digraph",
                    graphs,
                    lambda G: SweepService._failed(DigraphChecks.interior(G)[1], str(G.edges)),
                )
                return {"family": family, "instances": len(graphs)}, [check]
            case "facets":
                graphs = digraph_family(limit)

                def facet_problem(G: DiGraph) -> Optional[str]:
                    try:
                        classify_facets(polytope_of(G), G)
                    except CheckFailure as e:
                        logger.warning(f"facet classification failed on {G.edges}: {e}")
                        return f"{G.edges}: {e}"
                    report = classify_matroid_facets(graphic_matroid(G))
                    return None if report.ok else f"{G.edges}: {report.problems[0]}"

                check = SweepService._collect(
                    "facet_descriptions",
                    "digraph and graphic matroid facets match cuts, layerings and cocircuits",
                    graphs,
                    facet_problem,
                )
                return {"family": family, "instances": len(graphs)}, [check]
            case "matroid":
                graphs = digraph_family(limit, max_edges=7)

                def matroid_problem(G: DiGraph) -> Optional[str]:
                    graphic = graphic_matroid(G)
                    try:
                        graphic_poly = matroid_interior_polynomial(graphic)
                        matroid_interior_polynomial(dual_matroid(graphic))
                    except CheckFailure as e:
                        logger.warning(f"matroid identities failed on {G.edges}: {e}")
                        return f"{G.edges}: {e}"
                    if graphic_poly != hstar(polytope_of(G)):
                        return f"{G.edges}: graphic and digraph interior polynomials differ"
                    return None

                rng = random.Random(seed)
                count = TU_SWEEP_MATRICES if limit is None else min(limit, TU_SWEEP_MATRICES)
                matrices = [random_tu_matrix(rng, rng.randint(3, 5), rng.randint(4, 7)) for _ in range(count)]

                def invariance_problem(M: OrientedRegularMatroid) -> Optional[str]:
                    base = matroid_interior_polynomial(M, check=False)
                    for _ in range(5):
                        if matroid_interior_polynomial(scramble(M, rng), check=False) != base:
                            return f"{M.matrix}: interior polynomial changed under scrambling"
                    return None

                checks = [
                    SweepService._collect(
                        "matroid_dijoin_identities",
                        "graphic and cographic matroids: deg I_M = r - nu(M), leading coefficient counts dijoin sums",
                        graphs,
                        matroid_problem,
                    ),
                    SweepService._collect(
                        "representation_invariance",
                        "random unimodular matrices keep I_M under 5 random scramblings",
                        matrices,
                        invariance_problem,
                    ),
                ]
                return {"family": family, "instances": len(graphs), "matrices": len(matrices)}, checks
            case "eulerian":
                graphs = eulerian_digraphs(4, 8)[:limit]
                check = SweepService._collect(
                    "eulerian_identities",
                    "Eulerian: park = dual interior polynomial at every root, degree = genus - minfas",
                    graphs,
                    lambda G: SweepService._failed(DigraphChecks.eulerian(G)[1], str(G.edges)),
                )
                return {"family": family, "instances": len(graphs)}, [check]
            case "rooted":
                graphs = connected_digraphs(4, 7, multiplicity=2)
                pairs = rooted_family(graphs)[:limit]
                partial = rooted_family(graphs, spanning=False)[:limit]
                checks = [
                    SweepService._collect(
                        "rooted_identities",
                        "lowest exponent of lambda = rooted minfas = restriction size; Chan identity; acyclicity",
                        pairs,
                        lambda pair: SweepService._failed(
                            DigraphChecks.rooted(pair[0], pair[1], seed=seed)[1], f"{pair[0].edges} at {pair[1]}"
                        ),
                    ),
                    SweepService._collect(
                        "reachable_part_reduction",
                        "root missing some vertices: lambda = x^(|E|-|E'|) times lambda of the reachable part",
                        partial,
                        lambda pair: SweepService._failed(
                            [
                                DigraphChecks.reachable_reduction(
                                    pair[0],
                                    pair[1],
                                    greedoid_polynomial(BranchingGreedoid(pair[0], pair[1]), check_orders=0),
                                )
                            ],
                            f"{pair[0].edges} at {pair[1]}",
                        ),
                    ),
                ]
                return {"family": family, "instances": len(pairs), "partial_roots": len(partial)}, checks
            case "bipartite":
                graphs = bipartite_multigraphs(6)[:limit]
                check = SweepService._collect(
                    "bipartite_orientations",
                    "the standard orientation minimizes the degree; maximum degree follows the block rule",
                    graphs,
                    lambda U: SweepService._failed(OrientationScanService.scan(U)[1], str(U.edges)),
                )
                return {"family": family, "instances": len(graphs)}, [check]
            case _:
                raise InputError(f"unknown family '{family}', expected one of {', '.join(SweepService.FAMILIES)}")


class ReportService:
    """Rendering and storage of reports."""

    @staticmethod
    def stable_json(report: Report) -> str:
        """Key-sorted machine form without the wall time, LF terminated."""
        payload = report.model_dump(mode="json", exclude={"wall_time"})
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    @staticmethod
    def render_text(report: Report) -> str:
        lines = [f"command: {report.command}", f"instance: {report.instance_kind} {report.instance_digest[:12]}"]
        for key in sorted(report.values):
            lines.append(f"{key}: {json.dumps(report.values[key], sort_keys=True)}")
        if report.checks:
            lines.append("checks:")
            for check in report.checks:
                line = f"  {check.status.value:<4}  {check.name}: {check.statement}"
                if check.detail and check.status != CheckStatus.PASS:
                    line += f" ({check.detail})"
                lines.append(line)
        lines.append(f"wall time: {report.wall_time:.3f} s")
        return "\n".join(lines) + "\n"

    @staticmethod
    def store_report(report: Report) -> VerificationRun:
        """Persist a report in the run ledger."""
        create_tables()
        with get_session() as session:
            run = VerificationRun(
                command=report.command,
                instance_digest=report.instance_digest,
                instance_kind=report.instance_kind,
                exit_code=report.exit_code,
                wall_time=report.wall_time,
                report=json.loads(ReportService.stable_json(report)),
            )
            session.add(run)
            session.commit()
            session.refresh(run)
            logger.info(f"stored run {run.id} for {report.command} on {report.instance_digest[:12]}")
            return run

    @staticmethod
    def list_runs(limit: int = 20, instance_digest: Optional[str] = None) -> List[RunSummary]:
        """Most recent stored runs first."""
        create_tables()
        with get_session() as session:
            query = select(VerificationRun)
            if instance_digest is not None:
                query = query.where(VerificationRun.instance_digest == instance_digest)
            runs = session.exec(query.order_by(desc(VerificationRun.created_at)).limit(limit)).all()
            return [
                RunSummary(
                    id=run.id or 0,
                    command=run.command,
                    instance_digest=run.instance_digest,
                    instance_kind=run.instance_kind,
                    exit_code=run.exit_code,
                    wall_time=run.wall_time,
                    created_at=run.created_at.isoformat(),
                )
                for run in runs
            ]

    @staticmethod
    def get_run(run_id: int) -> Optional[VerificationRun]:
        with get_session() as session:
            return session.get(VerificationRun, run_id)
