import numpy as np, itertools, time
from glopss import *
from glopss.metrics import f_score

def instance(h, seed, m=25, n=100, kind='gaussian', sigma=0.5, p=0.2):
    kw = dict(edge_prob=p) if kind == 'erdos_renyi' else {}
    g, _ = generate_connected_graph(GenSpec(kind, m=m, **kw), seed=seed)
    X = generate_signals(g, SignalSpec(n=n, noise_sigma=sigma), seed=seed)
    mask, X_obs, W_obs = hide_nodes(g, X, h=h, seed=seed)
    return build_problem(X_obs), W_obs

def fit_f(pd, W_obs, variant, a, bcoef, gam, rho=0.03, maxit=3000):
    zbar = pd.z.mean()
    kw = dict(alpha=a*zbar, beta=bcoef*zbar)
    if variant.endswith('_lr'): kw['gammastar'] = gam
    elif variant != 'ablation_no_hidden': kw['gamma21'] = gam
    reg = RegParams(**kw)
    cfg = SolverConfig(reg=reg, rho=rho, variant=variant, max_iter=maxit,
                       eps_primal=1e-6, eps_dual=1e-6, diag_every=200)
    res, _ = solve(pd, cfg)
    return f_score(W_obs, res.weights).f_score, res.status

t0 = time.perf_counter()
print('--- grid at GA m=25 h=3, seed 100..102 ---', flush=True)
insts = [instance(3, 100+s) for s in range(3)]
for a, bc, gam in itertools.product([0.25, 0.5, 1.0], [0.25, 1.0], [0.5, 1.0, 1.9, 4.0]):
    fs = [fit_f(pd, W, 'glopss_cs', a, bc, gam)[0] for pd, W in insts]
    print('a=%.2f b=%.2f gam=%.2f  F=%.3f (%s)' % (a, bc, gam, np.median(fs), ','.join('%.2f'%f for f in fs)), flush=True)
print('--- ablation with same (a, b) ---', flush=True)
for a, bc in itertools.product([0.25, 0.5, 1.0], [0.25, 1.0]):
    fs = [fit_f(pd, W, 'ablation_no_hidden', a, bc, 0.0)[0] for pd, W in insts]
    print('a=%.2f b=%.2f  F_abl=%.3f' % (a, bc, np.median(fs)), flush=True)
print('t=%.0fs' % (time.perf_counter()-t0), flush=True)
