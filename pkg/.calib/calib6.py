import numpy as np, time
from glopss import *
from glopss.bench import make_trial
from glopss.graphs import laplacian
from glopss.metrics import recovery_error

gen = GenSpec('erdos_renyi', m=30, edge_prob=0.2)

def err(h, n, seed, a, b, gamma=2.5, variant='glopss_cs'):
    sig = SignalSpec(n=n, noise_sigma=0.5)
    g, _, mask, X_obs, _ = make_trial(gen, sig, h, seed, graph_seed=7)
    pd = build_problem(X_obs)
    zbar = pd.z.mean()
    kw = dict(alpha=a*zbar, beta=b*zbar)
    if variant.endswith('_lr'): kw['gammastar'] = gamma
    elif variant != 'ablation_no_hidden': kw['gamma21'] = gamma
    cfg = SolverConfig(reg=RegParams(**kw), rho=4.0/zbar, variant=variant,
                       max_iter=2500, eps_primal=1e-6, eps_dual=1e-6, diag_every=500)
    res, _ = solve(pd, cfg)
    d = recovery_error(laplacian(res.weights), laplacian(g), mask, X_obs=X_obs)
    return d.frobenius_error

t0 = time.perf_counter()
for h in (2, 6):
    for n in (100, 400, 1600):
        best = []
        for a in (0.3, 1.0, 3.0, 8.0):
            for b in (0.003, 0.01, 0.05):
                e = np.median([err(h, n, 1000+s, a, b) for s in range(3)])
                best.append((round(float(e),3), a, b))
        best.sort()
        print('h=%d n=%4d best:' % (h, n), best[:3], flush=True)
print('t=%.0fs' % (time.perf_counter()-t0))
