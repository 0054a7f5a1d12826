"""Built-in example networks used by docs and tests."""

from __future__ import annotations

from fractions import Fraction

from .model import NetworkSpec, make_spec

#: round trips for the four-city walkthrough network
_EX_RTT = (
    (0, 2, 9, 2),
    (2, 0, 7, 2),
    (9, 7, 0, 5),
    (2, 2, 5, 0),
)

#: each node wants one file strongly (1/5) and the others lightly (1/40);
#: the favorites of C and D coincide, which is what makes the instance
#: interesting: whoever serves C pays for its heavy file-2 demand over
#: a long round trip
_EX_DEMANDS = (
    (Fraction(1, 5), Fraction(1, 40), Fraction(1, 40)),
    (Fraction(1, 40), Fraction(1, 5), Fraction(1, 40)),
    (Fraction(1, 40), Fraction(1, 40), Fraction(1, 5)),
    (Fraction(1, 40), Fraction(1, 40), Fraction(1, 5)),
)


def example_instance() -> NetworkSpec:
    """Four nodes, three files, preferential demands.

    Small enough to check by hand: B and D sit two units from everyone
    except the far-off C, and C reaches the rest only through D (5) or
    B (7).  The supply graph is unique and its conflict graph has a
    single proper 3-coloring, {A, C} / {B} / {D}, so planning reduces
    to one assignment problem.
    """
    return make_spec(("A", "B", "C", "D"), _EX_RTT, _EX_DEMANDS, 3)


def example_instance_uniform() -> NetworkSpec:
    """Same network as :func:`example_instance` with flat demands; every
    admissible placement then costs the same."""
    uniform = tuple(tuple(Fraction(1, 12) for _ in range(3)) for _ in range(4))
    return make_spec(("A", "B", "C", "D"), _EX_RTT, uniform, 3)


def infeasible_instance() -> NetworkSpec:
    """Four nodes, three files, no admissible placement.

    The distances are tuned so the nodes' nearest-pair sets chain into
    a complete conflict graph on four nodes, which no three colors can
    break.  Distances still satisfy the triangle inequality, so this is
    a legitimate geometry, and a planner must prove infeasibility
    rather than error out.
    """
    rtt = (
        (0, 1, Fraction(21, 10), Fraction(7, 5)),
        (1, 0, Fraction(6, 5), Fraction(13, 10)),
        (Fraction(21, 10), Fraction(6, 5), 0, Fraction(3, 2)),
        (Fraction(7, 5), Fraction(13, 10), Fraction(3, 2), 0),
    )
    uniform = tuple(tuple(Fraction(1, 12) for _ in range(3)) for _ in range(4))
    return make_spec(("A", "B", "C", "D"), rtt, uniform, 3)
