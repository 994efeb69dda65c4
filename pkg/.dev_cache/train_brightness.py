import time, json
import numpy as np, torch
torch.set_num_threads(1)
from tokendial.backbone import load_checkpoint
from tokendial.perception import load_encoder, target_direction_from_exemplars
from tokendial.synthworld import SceneDistribution, make_dataset, SceneParams, \
    bright_dim_exemplars, prompt_from_words, oracle_brightness
from tokendial.trainer import LossConfig, RefineConfig, train_offset
from tokendial.offsets import save_offset, MaskSpec
from tokendial.guidance import GuidanceConfig, EditSpec, generate
from tokendial.slidereval import spearman, monotonicity

t0 = time.time()
model, _ = load_checkpoint(".dev_cache/backbone.tdbk")
enc = load_encoder(".dev_cache/encoder.tden")
clips = make_dataset(SceneDistribution(), 256, seed=11)

hi, lo = bright_dim_exemplars(SceneParams(), n=8, seed=0)
d_tgt = target_direction_from_exemplars(enc, hi, lo)
loss_cfg = LossConfig(kind="appearance", lambda_a=0.5, d_tgt=d_tgt)

offset, log = train_offset(
    model, enc, clips, loss_cfg, RefineConfig(extra_steps=4),
    steps=300, lr=1e-3, batch_size=4, seed=0, attribute_name="brightness",
    progress=lambda s, l, el: print(f"step {s}: loss {l:.4f} ({el:.0f}s)", flush=True))
save_offset(offset, ".dev_cache/brightness.tdof")
norms = {k: float(np.linalg.norm(v)) for k, v in offset.entries.items()}
print("offset norms:", norms, flush=True)
print("loss first10 median:", np.median(log.losses[:30]), "last10 median:", np.median(log.losses[-30:]))

# sweep
strengths = [0.0, 0.25, 0.5, 0.75, 1.0]
prompt = prompt_from_words(["disk", "white"])
rows = []
for seed in range(16):
    vals = []
    for s in strengths:
        cfg = GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                             edits=[EditSpec(offset=offset, s_edit=s, mask=MaskSpec())])
        v = generate(model, prompt, cfg).video
        try:
            vals.append(oracle_brightness(v))
        except Exception as e:
            vals.append(float("nan"))
    rho = spearman(strengths, vals)
    mono = monotonicity(vals)
    rows.append((seed, vals, rho, mono))
    print(f"seed {seed}: {[round(x,3) for x in vals]} rho {rho:.2f} mono {mono:.2f}", flush=True)

rhos = [r[2] for r in rows]; monos = [r[3] for r in rows]
print("mean Spearman:", np.mean(rhos), "mean Mono:", np.mean(monos))
print(f"total {time.time()-t0:.0f}s")
json.dump({"rhos": rhos, "monos": monos}, open(".dev_cache/brightness_sweep.json", "w"))
