"""Sign Conventions

The resolved ordering and sign conventions every module relies on. They are
fixed here once and checked against the symplectic oracle at run time by
shadow_eval.enforce_conventions(); nothing in the package may change them.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class SignConventions:
    """Immutable conventions shared by the Pauli tables, the oracle and the rules."""
    conjugation: str = "U R U^-1"
    quadrature_order: str = "(x_1..x_n, p_1..p_n)"
    pauli_normal_order: str = "exp(i phase) * prod Z_j(t_j) * prod X_j(s_j)"
    controlled_z_action: str = "p_1 -> p_1 - Omega x_2, p_2 -> p_2 - Omega x_1"
    scale_gate_action: str = "x_a -> lambda x_a, p_a -> p_a / lambda"
    # sign of r in lambda = e^{sign * r} for the squeezer S(r) with S x S^-1 = e^{r} x
    scale_lambda_exponent_sign: int = +1

    def scale_convention_text(self) -> str:
        sign = "+" if self.scale_lambda_exponent_sign > 0 else "-"
        other = "-" if sign == "+" else "+"
        return (
            f"scale <a> <lambda> multiplies every weight at a by lambda; "
            f"the oracle realizes it with S(r) where lambda = e^{{{sign}r}} "
            f"({self.scale_gate_action}); a rule quoted as 'multiply by e^{{{other}r}}' "
            f"under S(r) corresponds to S(-r) here"
        )


# Global immutable instance
S_conventions = SignConventions()
