import numpy as np, time
from glopss import *
from glopss.bench import make_trial, _problem, _fit
from glopss.graphs import laplacian
from glopss.metrics import recovery_error

gen = GenSpec('erdos_renyi', m=30, edge_prob=0.2)

def err(h, n, seed, a, b, gamma=2.5, variant='glopss_cs', maxit=4000):
    sig = SignalSpec(n=n, noise_sigma=0.5)
    g, _, mask, X_obs, _ = make_trial(gen, sig, h, seed, graph_seed=7)
    pd = _problem(X_obs)
    res, _ = _fit(pd, variant, a, b, gamma, 'auto', maxit, 1e-7, diag_every=500)
    d = recovery_error(laplacian(res.weights), laplacian(g), mask, X_obs=X_obs)
    return d.frobenius_error, res.converged

t0 = time.perf_counter()
grid_a = (0.5, 1.0, 2.0, 4.0, 8.0, 16.0)
for h in (2, 6):
    meds = {}
    for n in (100, 400, 1600):
        best = (np.inf, None)
        for a in grid_a:
            es = [err(h, n, 1000+s, a, 0.01)[0] for s in range(3)]
            m = float(np.median(es))
            if m < best[0]: best = (m, a)
        # eval with tuned a on fresh seeds
        ev = [err(h, n, s, best[1], 0.01) for s in range(6)]
        conv = sum(c for _, c in ev)
        meds[n] = float(np.median([e for e, _ in ev]))
        print('h=%d n=%4d tuned a=%4.1f tune-med=%.3f eval-med=%.3f conv=%d/6' %
              (h, n, best[1], best[0], meds[n], conv), flush=True)
    print('  ratios: %.3f %.3f' % (meds[400]/meds[100], meds[1600]/meds[400]), flush=True)
print('t=%.0fs' % (time.perf_counter()-t0))
