# coding: utf-8

# # Writing points and drawings
#
# Vertex tables and fit residuals go to CSV or JSON; drawings go to SVG with
# optional triangle rays, the envelope and an underlay image.

# In[1]:

import tempfile
from pathlib import Path

import trispiral as ts

out = Path(tempfile.mkdtemp())
spec = ts.spec_from_mod(12)


# In[2]:

print(ts.write_points(spec, "csv", count=5))


# Reading back what was written gives the same spiral.

# In[3]:

ts.write_points(spec, "json", out / "m12.json", count=40)
fit = ts.fit_triangular(ts.read_trace(out / "m12.json", "json"))
print(fit.classified_mod, fit.params.seed, fit.rms_error)


# In[4]:

opts = ts.RenderOptions(turns=2, show_triangles=True, show_envelope=True, show_guides=True)
ts.write_spiral_svg(spec, opts, out / "m12.svg")
print(out / "m12.svg", ts.chord_count(spec, 2))


# In[5]:

ts.write_growth_table(ts.growth_table(3, 12), "csv", out / "table.csv")
print((out / "table.csv").read_text())
