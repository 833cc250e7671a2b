"""
Model files
===========

Models can be written by hand. This one is the simplified client, whose role
has only two phases.
"""

from pathlib import Path

from paradigmkit import client_server, parse_model, print_model, verify_reduction
from paradigmkit.reduction import verify_detailed_preservation

here = Path(__file__).resolve().parent
model = parse_model((here / "models" / "client_simple_1.pm").read_text())
print("same as generated:", model == client_server(1, "simple"))

# hide every detailed action: the client collapses to a single state
actions = model.std("Client").actions
check = verify_reduction(model, "Client1", actions)
print("all hidden, sound:", bool(check), "| reduced component:", check.left.n_states, "states")

# does the role take any behaviour away from the client?
print("behaviour preserved:", bool(verify_detailed_preservation(model, "Client1")))

print(print_model(model)[:200], "...")
