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
# step 1: tune (alpha, beta) at h=0 on tuning seeds (4 seeds, 200+)
tune_insts = [instance(0, 200+s) for s in range(4)]
best = (-1, None, None)
for a, bc in itertools.product([0.05, 0.1, 0.2, 0.4, 0.8], [0.05, 0.2, 0.8]):
    fs = np.median([fit_f(pd, W, 'ablation_no_hidden', a, bc, 0.0) for pd, W in tune_insts])
    if fs > best[0]: best = (fs, a, bc)
print('h=0 tuned: F=%.3f a=%.2f b=%.2f' % best, 't=%.0fs' % (time.perf_counter()-t0), flush=True)
a0, b0 = best[1], best[2]

# step 2: gamma response at each h on eval seeds 0..5
for h in (1, 3, 5):
    insts = [instance(h, s) for s in range(6)]
    fa = np.median([fit_f(pd, W, 'ablation_no_hidden', a0, b0, 0.0) for pd, W in insts])
    out = []
    for gam in [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0]:
        fg = np.median([fit_f(pd, W, 'glopss_cs', a0, b0, gam) for pd, W in insts])
        out.append((gam, fg))
    print('h=%d: ablation F=%.3f | CS:' % (h, fa), ' '.join('g%.2g=%.3f' % t for t in out), flush=True)
print('t=%.0fs' % (time.perf_counter()-t0))
