"""Small-scale link simulation: FER curves and HARQ throughput.

A trimmed version of the full experiments (fewer frames, fewer points) that
still shows the qualitative picture: the copy-based family dominates the
fixed-set benchmark at the low-rate end, and IR beats chase combining.
The full-size sweeps run through the command line, see the README.
"""

from rcpolar import benchmark_family, build_family, estimate_fer, run_sessions

frames = 2000
fam = build_family(52, 8, (256, 192, 128, 64), tuple(range(8, 0, -1)))
bench = benchmark_family("benchmark-I", 52, 8, (256, 192, 128, 64),
                         tuple(range(8, 0, -1)))

print(f"frame-error rate of the lowest-rate code ({frames} frames/point):")
print("  Es/N0   proposed   benchmark-I")
for esn0 in (-6.0, -5.0, -4.0, -3.0, -2.0):
    a = estimate_fer(fam, 1, esn0, max_frames=frames, master_seed=1, workers=2)
    b = estimate_fer(bench, 1, esn0, max_frames=frames, master_seed=1, workers=2)
    print(f"  {esn0:+5.1f}   {a.fer:8.4f}   {b.fer:8.4f}")

print(f"\nthroughput, {frames} sessions/point:")
print("  Es/N0   proposed-IR   benchmark-I-IR   chase-combining")
for esn0 in (-5.0, -3.0, -1.0):
    p = run_sessions(fam, esn0, scheme="IR", frames=frames, master_seed=2,
                     workers=2)
    q = run_sessions(bench, esn0, scheme="IR", frames=frames, master_seed=2,
                     workers=2)
    c = run_sessions(fam, esn0, scheme="CC", frames=frames, master_seed=2,
                     workers=2)
    print(f"  {esn0:+5.1f}   {p.eta_empirical:11.4f}   {q.eta_empirical:14.4f}"
          f"   {c.eta_empirical:15.4f}")

print("\nconditional failure chain of the proposed scheme at -3 dB:")
st = run_sessions(fam, -3.0, scheme="IR", frames=frames, master_seed=2, workers=2)
for i, (r, f) in enumerate(zip(st.reached, st.failures), start=1):
    print(f"  stage {i}: reached {r}, failed {f}"
          + (f"  (p_{i} = {f / r:.3f})" if r else ""))
print(f"  throughput: formula {st.eta_formula:.4f}, "
      f"empirical {st.eta_empirical:.4f}")
