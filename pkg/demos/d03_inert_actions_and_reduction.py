"""
Inert actions and a sound reduction
===================================

A detailed step is globally inert when no trap of any phase containing both
ends tells them apart. Hiding such steps and merging bisimilar states gives
a smaller client that the rest of the system cannot distinguish.
"""

from paradigmkit import client_server, instance_inert_report, quotient_detailed, verify_reduction

model = client_server(2)
report = instance_inert_report(model, "Client1")
print(report)

# hide explain and leave, then merge
rc = quotient_detailed(model.std("Client"), report.inert_actions)
for block in rc.std.states:
    print(block, "=", rc.members[block])
print(rc.std.transitions)

# the reduced client against the original one
check = verify_reduction(model, "Client1", report.inert_actions)
print("sound:", bool(check), "|", check.left.n_states, "vs", check.right.n_states, "states")

# enter and thank are not inert, and hiding them shows
bad = verify_reduction(model, "Client1", {"enter", "thank"})
print("enter/thank:", bad.verdict)
