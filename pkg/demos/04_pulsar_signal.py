"""
Pulsar gravitational-wave Fourier transform
===========================================

The transform is a triple sum over the Bessel order n, multipole l and m. The
desk preset shrinks the Bessel argument to 300 so every factor can be checked;
the physical preset uses X of about 3e6 with the asymptotic paths.
"""
import warnings
from dataclasses import replace

from gwbessel.gw_signal import ft_signal, preset

desk = preset("desk")
print("desk: X =", desk.X, " k =", desk.k, " n range", desk.n_bounds())
for l_max in (4, 8, 12, 16):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = ft_signal(replace(desk, l_max=l_max), keep_terms=False)
    print(f"  l_max={l_max:2d}  total = {res.total:.12e}  tail {res.tail_estimate:.1e}")

res = ft_signal(desk)
print("\nlargest terms (n, l, m, |product|):")
for t in res.largest(5):
    print(f"  {t.n:4d} {t.l:3d} {t.m:3d}  {abs(t.product):.3e}")

phys = preset("physical")
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    out = ft_signal(phys)
print(f"\nphysical: X = {phys.X:.4g}, total = {out.total:.6e}")
print("Bessel paths:", sorted({str(m) for m in out.bessel_methods.values()}))
for w in caught:
    print("warning:", w.message)
