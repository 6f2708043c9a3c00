import numpy as np, itertools, time
from glopss import *
from glopss.metrics import f_score

def instance(h, seed, m=25, n=100, kind='gaussian', sigma=0.5, p=0.2):
    kw = dict(edge_prob=p) if kind == 'erdos_renyi' else {}
    g, _ = generate_connected_graph(GenSpec(kind, m=m, **kw), seed=seed)
    X = generate_signals(g, SignalSpec(n=n, noise_sigma=sigma), seed=seed)
    mask, X_obs, W_obs = hide_nodes(g, X, h=h, seed=seed)
    return build_problem(X_obs), W_obs

def fit_f(pd, W_obs, variant, a, bcoef, gam, rho=0.03, maxit=2500):
    zbar = pd.z.mean()
    kw = dict(alpha=a*zbar, beta=bcoef*zbar)
    if variant.endswith('_lr'): kw['gammastar'] = gam
    elif variant != 'ablation_no_hidden': kw['gamma21'] = gam
    reg = RegParams(**kw)
    cfg = SolverConfig(reg=reg, rho=rho, variant=variant, max_iter=maxit,
                       eps_primal=1e-6, eps_dual=1e-6, diag_every=500)
    res, _ = solve(pd, cfg)
    return f_score(W_obs, res.weights).f_score

t0=time.perf_counter()
# Where does the F-optimal (alpha, beta) sit at h=0 vs h=5?
for h in (0, 5):
    insts = [instance(h, 100+s) for s in range(3)]
    best = []
    for a, bc in itertools.product([0.05, 0.1, 0.2, 0.4, 0.8], [0.05, 0.2, 0.8]):
        fs = np.median([fit_f(pd, W, 'ablation_no_hidden', a, bc, 0.0) for pd, W in insts])
        best.append((fs, a, bc))
    best.sort(reverse=True)
    print('h=%d top5:' % h, [('%.3f' % f, a, b) for f, a, b in best[:5]], flush=True)
print('t=%.0fs' % (time.perf_counter()-t0))
