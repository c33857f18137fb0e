"""Combinatorial census for small orders.

Prints posequence counts, minimal-pattern family sizes per input index and,
for every reachable incapable set at n=3, the number of widely equivalent
puncturing patterns.
"""

from itertools import combinations

from polar_rm.domination import complies_with_domination, count_posequences
from polar_rm.puncture import psi_family_size, widely_equivalent_patterns


def main():
    for n in range(1, 5):
        print(f"n={n}: {count_posequences(n)} posequences")
    for n in (3, 4):
        sizes = [psi_family_size(j, n)[1] for j in range(1 << n)]
        print(f"n={n}: minimal pattern family sizes {sizes}")
    print("n=3 incapable set -> number of inducing patterns")
    for size in range(9):
        for u in combinations(range(8), size):
            if complies_with_domination(u, 3, "downward"):
                print(f"  {list(u)}: {len(widely_equivalent_patterns(u, 3))}")


if __name__ == "__main__":
    main()
