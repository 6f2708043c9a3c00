import numpy as np, time
from glopss import GenSpec
from glopss.bench import recovery_experiment, complexity_experiment

t0 = time.perf_counter()
for gamma in (1.0, 2.5):
    rows, med = recovery_experiment(
        GenSpec('erdos_renyi', m=30, edge_prob=0.2),
        h_values=(2, 6), n_values=(100, 400, 1600), trials=6,
        variant='glopss_cs', gamma=gamma, rho='auto', max_iter=2500, eps=1e-6)
    print('gamma=%.1f medians:' % gamma, {k: round(v, 3) for k, v in med.items()}, flush=True)
    for h in (2, 6):
        r1 = med[(h, 400)] / med[(h, 100)]
        r2 = med[(h, 1600)] / med[(h, 400)]
        print('  h=%d ratios: %.3f %.3f   (need <=0.8)' % (h, r1, r2), flush=True)
    for n in (100, 400, 1600):
        print('  n=%d: h6 >= h2? %.3f vs %.3f -> %s' % (n, med[(6, n)], med[(2, n)], med[(6, n)] >= med[(2, n)]), flush=True)
print('recovery t=%.0fs' % (time.perf_counter() - t0), flush=True)

t0 = time.perf_counter()
rows, fits = complexity_experiment(o_values=(20, 40, 80), variants=('glopss_cs', 'glopss_lr'), iters=150)
for r in rows: print(r, flush=True)
print('fit exponents:', fits, 'complexity t=%.0fs' % (time.perf_counter() - t0), flush=True)
