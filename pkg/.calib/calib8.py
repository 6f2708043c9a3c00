import numpy as np, time
from glopss import *
from glopss.bench import make_trial, ExperimentSpec, accuracy_sweep, median_f_table

# --- 1. convergence speed with 1/sqrt(n)-scaled signals (criterion 4 config)
gen = GenSpec('erdos_renyi', m=21, edge_prob=0.2)
sig = SignalSpec(n=100, noise_sigma=0.5)
t0 = time.perf_counter()
hits = {v: [] for v in ('glopss_lr', 'grass_lr')}
for seed in range(10):
    _, _, _, X_obs, _ = make_trial(gen, sig, 1, seed)
    pd = build_problem(X_obs / np.sqrt(sig.n))
    zbar = pd.z.mean()
    reg = RegParams(alpha=0.5*zbar, beta=1.0*zbar, gammastar=1.0)
    rho = 4.0/zbar
    ref, _ = solve(pd, SolverConfig(reg=reg, rho=rho, variant='glopss_lr', max_iter=50000,
                                    eps_primal=1e-12, eps_dual=1e-12, diag_every=500))
    for v in hits:
        cfg = SolverConfig(reg=reg, rho=rho, variant=v, max_iter=5000,
                           eps_primal=1e-14, eps_dual=1e-14, diag_every=100)
        _, hist = solve(pd, cfg, reference=ref.state)
        wg = np.array(hist.w_gap)
        hits[v].append(int(np.argmax(wg <= 1e-5)) + 1 if np.any(wg <= 1e-5) else -1)
print('scaled signals, rho=4/zbar:', {v: (sorted(h), float(np.median(h))) for v, h in hits.items()},
      't=%.0fs' % (time.perf_counter()-t0), flush=True)

# --- 2. hidden sweep trend at sigma=0.1
t0 = time.perf_counter()
spec = ExperimentSpec(
    gen=GenSpec('gaussian', m=25), sig=SignalSpec(n=100, noise_sigma=0.1),
    h_values=(1, 2, 3, 4, 5), variants=('glopss_cs', 'ablation_no_hidden'), trials=10)
rows, chosen = accuracy_sweep(spec, sweep='hidden', jobs=4, tune_trials=3)
med = median_f_table(rows, key='h')
for v in spec.variants:
    print('sigma=0.1 %-20s' % v, ['%.3f' % med[(v, h)] for h in spec.h_values], flush=True)
print('gammas:', {k: v for k, v in chosen.items() if k[0] == 'glopss_cs'},
      't=%.0fs' % (time.perf_counter()-t0), flush=True)
