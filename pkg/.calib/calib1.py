import numpy as np, time
from glopss import *

def make(seed):
    spec = GenSpec('erdos_renyi', m=21, edge_prob=0.2)
    g, _ = generate_connected_graph(spec, seed=seed)
    X = generate_signals(g, SignalSpec(n=100, noise_sigma=0.5), seed=seed)
    mask, X_obs, W_obs = hide_nodes(g, X, h=1, seed=seed)
    return build_problem(X_obs)

def iters_to(pd, reg, variant, rho, safety, tol=1e-5, maxit=5000):
    cfg_ref = SolverConfig(reg=reg, rho=rho, variant='glopss_lr', max_iter=50000,
                           eps_primal=1e-12, eps_dual=1e-12, safety=safety, diag_every=500)
    ref = solve(pd, cfg_ref)[0]
    cfg = SolverConfig(reg=reg, rho=rho, variant=variant, max_iter=maxit,
                       eps_primal=1e-14, eps_dual=1e-14, safety=safety, diag_every=500)
    res, hist = solve(pd, cfg, reference=ref.state)
    wg = np.array(hist.w_gap)
    hit = int(np.argmax(wg <= tol)) + 1 if np.any(wg <= tol) else -1
    return hit, ref.status, float(ref.kkt)

for (bs, rho, safety) in [(0.25, 0.01, 0.9), (0.25, 0.03, 0.9), (0.5, 0.01, 0.9),
                          (0.5, 0.03, 0.9), (0.25, 0.01, 0.99), (1.0, 0.03, 0.9)]:
    t0 = time.perf_counter()
    G, R = [], []
    for seed in range(10):
        pd = make(seed)
        zbar = pd.z.mean()
        reg = RegParams(alpha=0.5*zbar, beta=bs*zbar, gammastar=1.0)
        hg, st, kk = iters_to(pd, reg, 'glopss_lr', rho, safety)
        hr, _, _ = iters_to(pd, reg, 'grass_lr', rho, safety)
        G.append(hg); R.append(hr)
    ok = all(x > 0 for x in G)
    print('beta=%.2fz rho=%g safety=%.2f: all<5000=%s  G_med=%s g_med=%s  G=%s t=%.0fs'
          % (bs, rho, safety, ok, np.median([x for x in G if x>0] or [-1]),
             np.median([x for x in R if x>0] or [-1]), G, time.perf_counter()-t0), flush=True)
