import time, json, sys
import numpy as np, torch
torch.set_num_threads(1)
from tokendial.backbone import load_checkpoint
from tokendial.perception import load_encoder, target_direction_from_exemplars
from tokendial.synthworld import SceneDistribution, make_dataset, SceneParams, \
    bright_dim_exemplars, prompt_from_words, oracle_brightness
from tokendial.trainer import LossConfig, RefineConfig, train_offset
from tokendial.offsets import MaskSpec, save_offset
from tokendial.guidance import GuidanceConfig, EditSpec, generate
from tokendial.slidereval import spearman, monotonicity

model, _ = load_checkpoint(".dev_cache/backbone.tdbk")
enc = load_encoder(".dev_cache/encoder.tden")
clips = make_dataset(SceneDistribution(), 256, seed=11)
hi, lo = bright_dim_exemplars(SceneParams(), n=8, seed=0)
d_tgt = target_direction_from_exemplars(enc, hi, lo)

def sweep(offset, n_seeds=6):
    strengths = [0.0, 0.25, 0.5, 0.75, 1.0]
    prompt = prompt_from_words(["disk", "white"])
    rhos, monos, spans = [], [], []
    for seed in range(n_seeds):
        vals = []
        for s in strengths:
            cfg = GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                                 edits=[EditSpec(offset=offset, s_edit=s, mask=MaskSpec())])
            v = generate(model, prompt, cfg).video
            vals.append(oracle_brightness(v))
        rhos.append(spearman(strengths, vals))
        monos.append(monotonicity(vals))
        spans.append(vals[-1] - vals[0])
    return np.mean(rhos), np.mean(monos), np.mean(spans)

for lr, steps, lam in [(3e-3, 600, 0.5), (3e-3, 300, 0.5)]:
    t0 = time.time()
    lcfg = LossConfig(kind="appearance", lambda_a=lam, d_tgt=d_tgt)
    off, log = train_offset(model, enc, clips, lcfg, RefineConfig(extra_steps=4),
                            steps=steps, lr=lr, batch_size=4, seed=0,
                            attribute_name="brightness")
    norms = {k: round(float(np.linalg.norm(v)), 3) for k, v in off.entries.items()}
    rho, mono, span = sweep(off)
    print(f"lr={lr} steps={steps} lam={lam}: norms {norms} "
          f"rho {rho:.3f} mono {mono:.3f} span {span:+.3f} ({time.time()-t0:.0f}s)", flush=True)
    save_offset(off, f".dev_cache/bright_lr{lr}_s{steps}.tdof")
