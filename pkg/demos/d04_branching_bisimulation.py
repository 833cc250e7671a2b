"""
Branching bisimulation by hand
==============================

Small LTSs, written inline in Aldebaran format, compared and minimized.
"""

from paradigmkit import branching_quotient, equivalent, export_aut, import_aut, oracle_equivalent

# a.(tau.b + c) and a.(tau.b + c) + a.b
left = import_aut('des (0, 4, 4)\n(0,"a",1)\n(1,"tau",2)\n(2,"b",3)\n(1,"c",3)\n')
right = import_aut('des (0, 6, 6)\n(0,"a",1)\n(1,"tau",2)\n(2,"b",3)\n(1,"c",3)\n'
                   '(0,"a",4)\n(4,"b",5)\n')

v = equivalent(left, right)
print(v)
print("oracle agrees:", oracle_equivalent(left, right) == bool(v))

# a tau-step that loses nothing is removed by minimization
lazy = import_aut('des (0, 3, 3)\n(0,"tau",1)\n(1,"a",2)\n(0,"a",2)\n')
q, blocks = branching_quotient(lazy)
print(export_aut(q), end="")
print("block of each state:", blocks.mapping)
