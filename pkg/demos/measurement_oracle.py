"""The linear-algebra oracle: solve for orthogonality-preserving operators on a party group."""
from strongops import assemble_constraints, build, computational_basis, solve_solution_space, verify_definition1

ops = build("FourAsym", (3, 3, 3, 3))
cs = assemble_constraints(ops, (2, 3))
r = solve_solution_space(cs, exact=True)
print(f"X34: {cs.n_pairs} gated pairs, solution_dim {r.solution_dim}, gap {r.spectral_gap:.2e}, "
      f"nullity mod {r.exact_prime} = {r.exact_nullity} -> {r.verdict}")

# the computational basis leaves every diagonal operator free
ctrl = solve_solution_space(assemble_constraints(computational_basis((3,) * 4), (2, 3)))
print("computational basis:", ctrl.verdict, ctrl.solution_dim)

summary = verify_definition1(build("EvenN", (3,) * 6), threads=4)
print("EvenN n=6: every pair trivial =", summary.passed, f"({len(summary.results)} pairs)")
