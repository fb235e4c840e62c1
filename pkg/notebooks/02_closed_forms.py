# coding: utf-8

# # Closed forms and the continuous envelope
#
# Vertex radii follow r(n) = a / cos(phi0)**n. Writing n = phi / phi0 gives a
# logarithmic spiral through every vertex; the chords cut inside it.

# In[1]:

import math

import numpy as np

import trispiral as ts

spec = ts.spec_from_mod(8)


# Envelope and index formulas agree at vertex angles.

# In[2]:

n = np.arange(9)
print(ts.radius_at_angle(spec, n * spec.phi0))
print([ts.radius_at_index(spec, k) for k in n])


# Between vertices the chord polyline sits under the envelope. The worst gap
# is at mid-chord, where the ratio is cos(phi0 / 2).

# In[3]:

theta = np.linspace(0, 2 * math.pi, 400)
poly = ts.polyline_radius_at_angle(spec, theta)
env = ts.envelope_radius_at_angle(spec, theta)
print((poly <= env + 1e-12).all(), (poly / env).min(), math.cos(spec.phi0 / 2))


# The inverse map recovers the polar angle from a radius.

# In[4]:

r = ts.radius_at_angle(spec, 5.0)
print(ts.angle_from_radius(spec, r))


# Radius increments grow geometrically with the same base.

# In[5]:

dr = np.array([ts.radial_difference(spec, k) for k in range(6)])
print(dr[1:] / dr[:-1])


# Two slope conventions. The per-index one diverges as the apex angle tends
# to a right angle; the per-radian one is the envelope's true pitch.

# In[6]:

for deg in (10, 30, 45, 60, 80, 89.9):
    phi0 = math.radians(deg)
    a = math.degrees(ts.polar_slope_angle(phi0, "paper"))
    b = math.degrees(ts.polar_slope_angle(phi0, "per_radian"))
    print(f"{deg:5.1f}  {a:7.3f}  {b:7.3f}")


# Going the other way: the apex angle of a triangular spiral whose envelope
# grows like a given log spiral.

# In[7]:

B = ts.growth_rate(spec.phi0)
print(B, math.degrees(ts.phi0_from_growth(B)))
