# coding: utf-8

# # Fitting traces and picking a model
#
# A synthetic trace is sampled along a chord polyline, perturbed by relative
# noise, and scored against every even mod plus three smooth baselines.

# In[1]:

import numpy as np

import trispiral as ts

truth = ts.spec_from_mod(16, seed=1.3, phase=0.1)
trace = ts.sample_polyline(truth, turns=4, per_triangle=8, noise=0.005, rng=7)


# In[2]:

fit = ts.fit_triangular(trace)
print(fit.classified_mod, fit.params.seed, fit.params.phase, fit.rms_error)


# Candidate scores: neighbours of the true mod are clearly worse.

# In[3]:

for mod in (12, 14, 16, 18, 20):
    print(mod, fit.candidate_scores[mod])


# In[4]:

cls = ts.classify_mod(trace)
print(cls.mod, cls.confidence, cls.continuous_mod)


# The smooth baselines cannot follow the chord sag.

# In[5]:

for f in (ts.fit_log_spiral(trace), ts.fit_golden_spiral(trace), ts.fit_hls(trace)):
    print(f.kind, f.rms_error)


# On a true log spiral no mod wins outright: finer polygons keep getting
# closer as long as the growth is slower than the finest candidate.

# In[6]:

theta = np.linspace(0, 6 * np.pi, 400)
log_trace = np.column_stack([theta, np.exp(0.05 * theta)])
scores = ts.fit_triangular(log_trace).candidate_scores
print([round(scores[m], 5) for m in (6, 10, 20, 30, 40)])


# A circle has no growth and is rejected rather than forced onto a mod.

# In[7]:

try:
    ts.classify_mod(np.column_stack([theta, np.ones_like(theta)]))
except ts.DegenerateTraceError as exc:
    print("rejected:", exc)
