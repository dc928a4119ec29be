"""
Checking the published tables
=============================

Every constructible row of the order p^4 and p^5 tables is rebuilt from its
presentation, and its codegree set is computed by formula (when one
applies) and by brute force.
"""

from codegree.verify import verify

result = verify("p4", primes=[5])
for r in result.records:
    print(f"{r.paper_row:12s} p={r.p} {r.status:8s} expected={r.expected} brute={r.bruteforce}")

###############################################################################
# The order p^5 suite at p = 5.  Three of the groups are not VZ and not
# Camina, so only the character table speaks for them.

result = verify("p5", primes=[5])
for r in result.records:
    if r.group == "not_constructible":
        continue
    print(f"{r.paper_row:14s} {r.status:5s} formula={r.formula} brute={r.bruteforce}")
print(result.counts())
