"""
Translating one client
======================

A client walks Out -> Waiting -> Busy -> AtDoor and back. Its role in the
critical-section protocol restricts it to one phase at a time. Here we turn
both views into processes and put them together.
"""

from paradigmkit import client_server
from paradigmkit.lts import format_label
from paradigmkit.translate import translate_component, translate_component_dg

model = client_server(2)
client1 = model.instance("Client1")

# the translation gives one detailed process plus one global process per role
comp = translate_component(model, client1)
print("detailed:", comp.detailed.n_states, "states,", len(comp.detailed.transitions), "transitions")
print("queried states:", sorted(comp.queried))

# global process: phases refined by what is known about the traps
glob = comp.globals[0]
for s, a, t in glob.transitions:
    print(f"  {glob.name(s):20} {format_label(a):28} {glob.name(t)}")

# detailed and global process in lock-step; trap actions stay open
dg = translate_component_dg(model, "Client1")
print("composed client:", dg.n_states, "states")
