"""Build each family and compare enumerated sizes with the closed forms."""
from strongops import build

for d in (3, 4, 5):
    asym = build("FourAsym", (d,) * 4).count()
    sym = build("FourSym", (d,) * 4).count()
    print(f"d={d}: FourAsym {asym} (12d^2-20d+4 = {12 * d * d - 20 * d + 4}), "
          f"FourSym {sym} (4d^3-10d^2+12d-4 = {4 * d**3 - 10 * d * d + 12 * d - 4})")

ops = build("FourAsym", (3, 3, 3, 3))
for block in ops.blocks[:4]:
    print(f"{block.id:<6} {block.describe():<32} {block.size} states")

for n in (5, 7):
    print(f"OddN n={n}, d=3: {build('OddN', (3,) * n).count()} states")
for n in (6, 8):
    print(f"EvenN n={n}, d=3: {build('EvenN', (3,) * n).count()} states")

# mixed local dimensions work the same way
print("FourSym (3,4,5,3):", build("FourSym", (3, 4, 5, 3)).count(), "states")
