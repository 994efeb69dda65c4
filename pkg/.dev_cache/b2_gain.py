import numpy as np, torch
torch.set_num_threads(1)
from tokendial.backbone import load_checkpoint
from tokendial.offsets import load_offset, MaskSpec
from tokendial.guidance import GuidanceConfig, EditSpec, generate
from tokendial.synthworld import prompt_from_words, oracle_brightness, OracleError, \
    make_dataset, SceneDistribution, SceneParams, bright_dim_exemplars
from tokendial.slidereval import spearman, monotonicity
from tokendial.perception import load_encoder, target_direction_from_exemplars
from tokendial.trainer import RefineConfig, appearance_effect_fn, refined_estimate

model, _ = load_checkpoint(".dev_cache/backbone2.tdbk")
enc = load_encoder(".dev_cache/encoder2.tden")
cal = load_offset(".dev_cache/brightness2.tdof")  # gain 57.5 baked in
raw = cal.scaled(1.0 / 57.5)
clips = make_dataset(SceneDistribution(), 32, seed=11)
hi, lo = bright_dim_exemplars(SceneParams(), n=8, seed=0)
d_tgt = target_direction_from_exemplars(enc, hi, lo)
gap = float(np.linalg.norm(np.mean([enc.encode(v) for v in hi],0) - np.mean([enc.encode(v) for v in lo],0)))
eff = appearance_effect_fn(enc, d_tgt)
rcfg = RefineConfig(extra_steps=4)

rng = np.random.default_rng(0)
idx = rng.choice(len(clips), size=6, replace=False)
ts = np.linspace(0.3, 0.9, 6)
gen = torch.Generator().manual_seed(3)
probes = []
for i, t in zip(idx, ts):
    x0 = torch.from_numpy(clips[int(i)].video.data)
    probes.append((x0, float(t), clips[int(i)].prompt, torch.randn(x0.shape, generator=gen)))

prompt = prompt_from_words(["disk", "white"])
strengths = [0.0, 0.25, 0.5, 0.75, 1.0]
with torch.no_grad():
    for g in (16.0, 24.0, 32.0, 40.0):
        vals = []
        for x0, t, pr, noise in probes:
            xw, xo = refined_estimate(model, x0, t, pr, [(raw.scaled(g), MaskSpec())], rcfg, noise=noise)
            vals.append(eff(xw, xo))
        probe_ratio = np.mean(vals) / gap
        rhos, monos, fails = [], [], 0
        for seed in range(8):
            curve = []
            for s in strengths:
                v = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                             edits=[EditSpec(offset=raw.scaled(g), s_edit=s, mask=MaskSpec())])).video
                try:
                    curve.append(oracle_brightness(v))
                except OracleError:
                    curve.append(np.nan); fails += 1
            if np.isnan(curve).any():
                rhos.append(0.0); monos.append(0.0)
            else:
                rhos.append(spearman(strengths, curve)); monos.append(monotonicity(curve))
        print(f"gain {g}: probe_ratio {probe_ratio:.2f} rho {np.mean(rhos):.3f} "
              f"mono {np.mean(monos):.3f} oracle-fails {fails}", flush=True)
