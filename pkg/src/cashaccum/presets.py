"""Built-in scenario documents for the three worked examples."""

EXAMPLE1 = """\
# One asset bought after one year, daily account updates.
mode=asset_replication
T=1
N=365
S0=150
drift=0
sigma=0.5
r=0.12
start_cash=50
gamma=1
seed=1
"""

EXAMPLE2 = """\
# Two independent assets bought together after one year.
# start_cash is the account total; each process starts with half.
mode=asset_replication
T=1
N=365
m=2
S0=200,400
drift=0
sigma=0.5
r=0.3
start_cash=40
gamma=1
seed=2
"""

EXAMPLE3 = """\
# Half of the excess over a strike of 30, over two years, updates every two days.
mode=excess_replication
T=2
N=365
S0=75
drift=0
sigma=0.3
r=0.03
start_cash=0
gamma=1
K=30
c=0.5
floor_at_zero=true
seed=3
"""

PRESETS = {"example1": EXAMPLE1, "example2": EXAMPLE2, "example3": EXAMPLE3}
