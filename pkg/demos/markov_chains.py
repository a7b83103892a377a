"""Entropy rate vs erasure rate for binary Markov chains.

A stationary process compresses to its entropy rate h when decoded from the
past alone; if every OTHER symbol is already known, the missing one costs
only the (smaller) erasure rate h-.  For a flip-probability chain both rates
have closed forms, and a k-step chain ties them together through an exact
identity with a third, gap-conditioned block term.
"""

import numpy as np

from erasure_entropy import (
    DmeSpec,
    Unit,
    binary_symmetric_chain,
    block_given_past_entropy,
    dme_bound_report,
    entropy_rate,
    erasure_rate,
    interval_erasure_rate,
    markov_identity_residual,
)

# --- the two rates for a range of flip probabilities -----------------------

print("flip eps      h [bits]     h- [bits]    ratio h-/h")
for eps in (0.01, 0.05, 0.1, 0.2, 0.4):
    chain = binary_symmetric_chain(eps)
    h = entropy_rate(chain, Unit.BITS).value
    hm = erasure_rate(chain, Unit.BITS).value
    print(f"  {eps:4.2f}     {h:9.6f}    {hm:9.6f}    {hm / h:7.4f}")

# the two-sided rate is always the cheaper one: knowing the future helps

# --- the k-step identity ---------------------------------------------------

chain = binary_symmetric_chain(0.1)
h = entropy_rate(chain).value
hm = erasure_rate(chain).value
hb = block_given_past_entropy(chain).value
print()
print(f"(k+1) h               = {2 * h:.12f} nats")
print(f"h- + H(gap block)     = {hm + hb:.12f} nats")
print(f"identity residual     = {markov_identity_residual(chain):.2e}")

# --- erasing a whole interval ----------------------------------------------
# reconstructing L consecutive symbols from both endpoints costs more per
# symbol as L grows, climbing from h- back up toward h

print()
print("L     H(interval)/L [bits]")
for L in (1, 2, 5, 10, 50):
    print(f"{L:3d}   {interval_erasure_rate(chain, L, Unit.BITS).value:.6f}")

# --- symbols lost at random: the memoryless erasure channel ----------------
# with erasure probability p, the per-symbol reconstruction cost h_n(X|Z)
# behaves like p * h- for small p — isolated erasures dominate

print()
print("p      h_n(X|Z)    p*h-       h_n/p")
for p, hn, phm, ratio in dme_bound_report(chain, [0.02, 0.1, 0.3, 0.6], 10, Unit.BITS):
    print(f"{p:4.2f}   {hn:8.6f}   {phm:8.6f}   {ratio:8.6f}")
