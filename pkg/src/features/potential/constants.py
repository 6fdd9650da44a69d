import numpy as np

# Green function growth rate: G(x, x) ~ g log N.
g = 1.0 / (2.0 * np.pi)

# a(x) = g log|x| + c0 + O(|x|^-2) for the kernel normalized by a(e1) = 1/4.
c0 = (2.0 * np.euler_gamma + np.log(8.0)) / (4.0 * np.pi)

# Thick-point exponent scale, alpha^2 = 8 pi.
alpha = 2.0 / np.sqrt(g)
