"""Built-in example models used by tests and the ``scenarios`` command."""

from __future__ import annotations

from fractions import Fraction

from .models import EmpiricalModel, HVModel, make_empirical, make_hv

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)
BITS = ("0", "1")


def det() -> HVModel:
    """Singleton hidden space, one context, both outcomes fixed at 0."""
    return make_hv(BITS, BITS, ["0"], ["0"], ["l0"], {("0", "0", "0", "0", "l0"): 1})


def coin() -> HVModel:
    """Fair hidden coin copied to both outcomes."""
    return make_hv(BITS, BITS, ["0"], ["0"], ["l0", "l1"], {
        ("0", "0", "0", "0", "l0"): HALF,
        ("1", "1", "0", "0", "l1"): HALF,
    })


def coin_two_bob_settings() -> HVModel:
    """The hidden coin with Bob choosing between two settings that behave identically."""
    mass = {}
    for yb in BITS:
        mass[("0", "0", "0", yb, "l0")] = QUARTER
        mass[("1", "1", "0", yb, "l1")] = QUARTER
    return make_hv(BITS, BITS, ["0"], BITS, ["l0", "l1"], mass)


def oi_violation() -> HVModel:
    """Perfectly correlated fair coin with nothing hidden."""
    return make_hv(BITS, BITS, ["0"], ["0"], ["l0"], {
        ("0", "0", "0", "0", "l0"): HALF,
        ("1", "1", "0", "0", "l0"): HALF,
    })


def signal() -> HVModel:
    """Alice's outcome copies Bob's (uniform) measurement choice."""
    return make_hv(BITS, BITS, ["0"], BITS, ["l0"], {
        ("0", "0", "0", "0", "l0"): HALF,
        ("1", "0", "0", "1", "l0"): HALF,
    })


def ldep() -> HVModel:
    """Alice's setting equals the hidden bit; outcomes fixed."""
    return make_hv(BITS, BITS, BITS, ["0"], ["l0", "l1"], {
        ("0", "0", "0", "0", "l0"): HALF,
        ("0", "0", "1", "0", "l1"): HALF,
    })


def pr_box() -> EmpiricalModel:
    """Uniform contexts; outcomes uniform on x_a xor x_b = y_a and y_b."""
    mass = {}
    for ya in (0, 1):
        for yb in (0, 1):
            for xa in (0, 1):
                xb = xa ^ (ya & yb)
                mass[(str(xa), str(xb), str(ya), str(yb))] = Fraction(1, 8)
    return make_empirical(BITS, BITS, BITS, BITS, mass)


def correlated_coin() -> EmpiricalModel:
    return coin().empirical()


def product_coins() -> EmpiricalModel:
    return make_empirical(BITS, BITS, ["0"], ["0"],
                          {(xa, xb, "0", "0"): QUARTER for xa in BITS for xb in BITS})


SCENARIOS = {
    "det": det,
    "coin": coin,
    "pr-box": pr_box,
    "signal": signal,
    "ldep": ldep,
    "oi-viol": oi_violation,
    "product-coins": product_coins,
}
