# coding: utf-8

# # Building a triangular spiral
#
# Each right triangle shares the apex O. Its hypotenuse becomes the height
# of the next one, so every step multiplies the radius by 1/cos(phi0).

# In[1]:

import math

import numpy as np

import trispiral as ts


# A mod-12 spiral turns 30 degrees per triangle. Starting from a height of
# sqrt(3), the first triangle is the familiar 1 : sqrt(3) : 2.

# In[2]:

spec = ts.spec_from_mod(12, seed=math.sqrt(3))
first, second = ts.triangles(spec, 2)
print(first.height, first.base, first.hypotenuse)
print(second.height, second.base, second.hypotenuse, 4 / math.sqrt(3))


# Consecutive patches share a vertex object, not just equal coordinates.

# In[3]:

print(first.outer_vertex is second.inner_vertex)


# After one full turn the twelfth vertex is back on the starting ray.

# In[4]:

pts = np.array(ts.vertices(ts.spec_from_mod(12), 13))
print(pts[0], pts[12], ts.growth_base(spec) ** 12)


# Handedness only mirrors the picture.

# In[5]:

cw = np.array(ts.vertices(ts.spec_from_mod(12, handedness="cw"), 13))
print(np.allclose(cw[:, 0], pts[:, 0]), np.allclose(cw[:, 1], -pts[:, 1]))


# Polygons with more sides give flatter triangles and slower growth.

# In[6]:

for row in ts.growth_table(3, 12):
    print(f"{row.sides:3d} {row.degrees:8.3f} {row.base:.9f}")
