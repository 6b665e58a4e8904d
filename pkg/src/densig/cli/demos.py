"""Built-in programs for ``densig demo``."""

EQ4 = """\
# classically correlated channel: analysis and teleportation of c = (0.6, 0.8)
dims 2 2
rho R = classical_corr
analyze R
teleport R with 0.6 0.8
"""

EQ7 = """\
# Bell channel written out as a ket
dims 2 2
ket psi = (0.7071067811865476+0i)|0,0> + (0.7071067811865476+0i)|1,1>
rho R = proj(psi)
analyze R
teleport R with 0.6 0.8
compare 0.6 0.8
"""

GHZ = """\
# two-term tripartite pure state reduced onto A,B and onto A,C
dims 2 2
rho AB = tripartite(0.5, 0.5).AB
rho AC = tripartite(0.5, 0.5).AC
analyze AB
analyze AC
"""

DEMOS = {"eq4": EQ4, "eq7": EQ7, "ghz": GHZ}
