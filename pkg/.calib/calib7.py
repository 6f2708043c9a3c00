import numpy as np, time
from glopss import GenSpec, SignalSpec
from glopss.bench import ExperimentSpec, accuracy_sweep, median_f_table

t0 = time.perf_counter()
spec = ExperimentSpec(
    gen=GenSpec('gaussian', m=25),
    sig=SignalSpec(n=100, noise_sigma=0.5),
    h_values=(1, 2, 3, 4, 5),
    variants=('glopss_cs', 'glopss_lr', 'ablation_no_hidden'),
    trials=10)
rows, chosen = accuracy_sweep(spec, sweep='hidden', jobs=4, tune_trials=4)
med = median_f_table(rows, key='h')
print('tuned gammas:', chosen, flush=True)
for v in spec.variants:
    print('%-20s' % v, ['%.3f' % med[(v, h)] for h in spec.h_values], flush=True)
print('hidden sweep t=%.0fs' % (time.perf_counter()-t0), flush=True)

t0 = time.perf_counter()
spec_n = ExperimentSpec(
    gen=GenSpec('erdos_renyi', m=25, edge_prob=0.2),
    sig=SignalSpec(n=100, noise_sigma=0.5),
    h_values=(1,),
    variants=('glopss_cs', 'glopss_lr', 'ablation_no_hidden'),
    trials=10)
rows_n, chosen_n = accuracy_sweep(spec_n, sweep='noise', sigmas=(0.1, 0.5, 1.0), jobs=4, tune_trials=4)
med_n = median_f_table(rows_n, key='sigma')
print('tuned gammas:', chosen_n, flush=True)
for v in spec_n.variants:
    print('%-20s' % v, ['%.3f' % med_n[(v, s)] for s in (0.1, 0.5, 1.0)], flush=True)
print('noise sweep t=%.0fs' % (time.perf_counter()-t0), flush=True)
