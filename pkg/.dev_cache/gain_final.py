import numpy as np, torch, time
torch.set_num_threads(1)
from tokendial.backbone import load_checkpoint
from tokendial.offsets import load_offset, MaskSpec
from tokendial.guidance import GuidanceConfig, EditSpec, generate
from tokendial.synthworld import prompt_from_words, oracle_brightness, make_dataset, SceneDistribution
from tokendial.slidereval import spearman, monotonicity
from tokendial.perception import load_encoder, target_direction_from_exemplars
from tokendial.trainer import RefineConfig, calibrate_offset_gain, appearance_effect_fn
from tokendial.synthworld import SceneParams, bright_dim_exemplars

model, _ = load_checkpoint(".dev_cache/backbone.tdbk")
enc = load_encoder(".dev_cache/encoder.tden")
off_small = load_offset(".dev_cache/brightness.tdof")
clips = make_dataset(SceneDistribution(), 256, seed=11)
hi, lo = bright_dim_exemplars(SceneParams(), n=8, seed=0)
d_tgt = target_direction_from_exemplars(enc, hi, lo)
hi_emb = np.mean([enc.encode(v) for v in hi], axis=0)
lo_emb = np.mean([enc.encode(v) for v in lo], axis=0)
gap = float(np.linalg.norm(hi_emb - lo_emb))
print("gap:", gap, flush=True)

# probe effect at ladder gains (what calibration sees)
eff = appearance_effect_fn(enc, d_tgt)
rcfg = RefineConfig(extra_steps=4)
import tokendial.trainer as T
rng = np.random.default_rng(0)
idx = rng.choice(len(clips), size=6, replace=False)
ts = np.linspace(0.3, 0.9, 6)
gen = torch.Generator().manual_seed(3)
probes = []
for i, t in zip(idx, ts):
    x0 = torch.from_numpy(clips[int(i)].video.data)
    noise = torch.randn(x0.shape, generator=gen)
    probes.append((x0, float(t), clips[int(i)].prompt, noise))

with torch.no_grad():
    for g in (4.0, 8.0, 12.0, 16.0, 24.0):
        vals = []
        for x0, t, pr, noise in probes:
            xw, xo = T.refined_estimate(model, x0, t, pr, [(off_small.scaled(g), MaskSpec())], rcfg, noise=noise)
            vals.append(eff(xw, xo))
        print(f"gain {g}: probe effect {np.mean(vals):.4f} (ratio of gap: {np.mean(vals)/gap:.3f})", flush=True)

strengths = [0.0, 0.25, 0.5, 0.75, 1.0]
prompt = prompt_from_words(["disk", "white"])
for g in (16.0, 24.0):
    rhos, monos, spans = [], [], []
    for seed in range(16):
        vals = []
        for s in strengths:
            cfg = GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                                 edits=[EditSpec(offset=off_small.scaled(g), s_edit=s, mask=MaskSpec())])
            vals.append(oracle_brightness(generate(model, prompt, cfg).video))
        rhos.append(spearman(strengths, vals)); monos.append(monotonicity(vals)); spans.append(vals[-1]-vals[0])
    print(f"gain {g} x16 seeds: rho {np.mean(rhos):.3f} mono {np.mean(monos):.3f} span {np.mean(spans):+.3f}", flush=True)
