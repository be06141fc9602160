"""Replay the shipped certificates and discharge the remaining pairs by symmetry."""
from strongops import build, check_zgy, shipped_certificates, verify_strong_nonlocality

certs = shipped_certificates()
cert = certs["appB_x24"]
print(cert.label, "R for S_2:", cert.pi_map["S_2"])
rep = check_zgy(None, None, build("FourAsym", (3,) * 4), cert)
print("replay:", "PASS" if rep.passed else rep.first_failure())

for family, dims in [("FourSym", (3,) * 4), ("FourSym", (5,) * 4), ("OddN", (3,) * 7), ("EvenN", (3,) * 6)]:
    reports = verify_strong_nonlocality(build(family, dims))
    routes = {}
    for r in reports:
        routes[r.route] = routes.get(r.route, 0) + 1
    ok = all(r.passed for r in reports)
    print(f"{family:<8} d={dims[0]} n={len(dims)}: {len(reports)} pairs, routes {routes}, all pass={ok}")
