"""Setting up a problem by hand, once in code and once as configuration text.

y(t) = g(t) + int_0^t (t-s)^(-2/3) y(s) ds with y(t) = t chosen in advance,
so g(t) = t - B(1/3, 2) t^(4/3). With sigma = 1/3, t is index 3.
"""
import numpy as np
from scipy.special import beta

from abeltau import Problem, solve, sup_error
from abeltau.config import parse_config

p = Problem.build([["1/3"]], [[1.0]], [{3: 1.0, 4: -beta(1 / 3, 2)}], exact=[lambda t: t])
sol = solve(p, 5)
print("from code:   sup error", sup_error(sol, p.exact), " taus", sol.tau_vector)

text = """
[problem]
name = linear
alphas = 1/3

[kernel 1 1]
terms = (0, 0, 1)

[forcing 1]
terms = (3, 1), (4, -Beta(1/3, 2))

[exact 1]
terms = (3, 1)
"""
q = parse_config(text).to_problem()
sol = solve(q, 5)
t = np.linspace(0, 1, 5)
print("from config: Y_5 at", t, "=", np.round(sol(t)[0], 12))
