"""
State-space growth
==================

The full system composes every client with the server. The reduced system
first shrinks each client by abstracting from actions the protocol cannot
see. Both grow exponentially in the number of clients, at different rates.
"""

import time

from paradigmkit import client_server, reduced_system, translate_system

print(f"{'n':>3} {'states':>8} {'trans':>8} {'red.states':>11} {'red.trans':>10} {'secs':>6}")
for n in range(2, 6):
    model = client_server(n)
    t0 = time.perf_counter()
    full = translate_system(model, names=False)
    red = reduced_system(model, names=False)
    dt = time.perf_counter() - t0
    print(f"{n:>3} {full.n_states:>8} {len(full.transitions):>8} "
          f"{red.n_states:>11} {len(red.transitions):>10} {dt:>6.2f}")

# the reduced counts follow (7n + 2) * 2^(n-1)
for n in range(2, 6):
    print(n, (7 * n + 2) * 2 ** (n - 1))
