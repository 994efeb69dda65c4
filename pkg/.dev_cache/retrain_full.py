import time, json
import numpy as np, torch
torch.set_num_threads(1)
from tokendial.synthworld import SceneDistribution, make_dataset, SceneParams, \
    bright_dim_exemplars, prompt_from_words, oracle_brightness, oracle_displacement, OracleError
from tokendial.backbone import BackboneConfig, VideoBackbone, train_backbone, save_checkpoint
from tokendial.perception import prepare_appearance_encoder, save_encoder, \
    target_direction_from_exemplars
from tokendial.trainer import LossConfig, RefineConfig, train_offset, \
    calibrate_offset_gain, calibrate_offset_gain_generative, appearance_effect_fn
from tokendial.offsets import save_offset, MaskSpec, BoxGeometry
from tokendial.guidance import GuidanceConfig, EditSpec, generate
from tokendial.slidereval import spearman, monotonicity
from tokendial.perception import frame_perceptual_distance

t0 = time.time()
dist = SceneDistribution()
small = make_dataset(dist, 256, seed=11)
big = make_dataset(dist, 64, seed=12, frames=12, height=48, width=48)
model = VideoBackbone(BackboneConfig(), seed=0)
log = train_backbone(model, small + big, steps=2000, cond_drop_prob=0.1, lr=3e-4,
                     batch_size=8, seed=0,
                     progress=lambda s, l: print(f"bb step {s}: {l:.4f} ({time.time()-t0:.0f}s)", flush=True))
print("val:", log.val_loss, "zero:", log.zero_predictor_loss, flush=True)
save_checkpoint(model, ".dev_cache/backbone2.tdbk", {"steps": 2000})

enc = prepare_appearance_encoder(small, steps=600, seed=0)
save_encoder(enc, ".dev_cache/encoder2.tden")
print(f"encoder done ({time.time()-t0:.0f}s)", flush=True)

prompt = prompt_from_words(["disk", "white"])
# base displacement spread
disps = []
for seed in range(16):
    v = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed)).video
    try: disps.append(oracle_displacement(v))
    except OracleError: pass
print("base disp mean/p90:", np.mean(disps), np.percentile(disps, 90), flush=True)

# brightness pipeline
hi, lo = bright_dim_exemplars(SceneParams(), n=8, seed=0)
d_tgt = target_direction_from_exemplars(enc, hi, lo)
gap = float(np.linalg.norm(np.mean([enc.encode(v) for v in hi],0) - np.mean([enc.encode(v) for v in lo],0)))
bcfg = LossConfig(kind="appearance", lambda_a=0.5, d_tgt=d_tgt)
boff, _ = train_offset(model, enc, small, bcfg, RefineConfig(extra_steps=4),
                       steps=300, lr=1e-3, batch_size=4, seed=0, attribute_name="brightness")
boff, bg = calibrate_offset_gain(model, boff, small, appearance_effect_fn(enc, d_tgt),
                                 target=gap, refine_cfg=RefineConfig(extra_steps=4), seed=0)
save_offset(boff, ".dev_cache/brightness2.tdof")
print(f"brightness gain {bg:.1f} ({time.time()-t0:.0f}s)", flush=True)

strengths = [0.0, 0.25, 0.5, 0.75, 1.0]
rhos, monos = [], []
for seed in range(8):
    vals = [oracle_brightness(generate(model, prompt, GuidanceConfig(
        s_txt=4.5, steps=32, seed=seed,
        edits=[EditSpec(offset=boff, s_edit=s, mask=MaskSpec())])).video) for s in strengths]
    rhos.append(spearman(strengths, vals)); monos.append(monotonicity(vals))
print(f"A7 quick: rho {np.mean(rhos):.3f} mono {np.mean(monos):.3f}", flush=True)

# A9 quick
geo = MaskSpec(source="user_geometry", geometry=BoxGeometry(box=(0.0, 0.0, 0.5, 1.0), edge=0.05))
lefts, rights = [], []
for seed in range(8):
    base = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed)).video.data
    edit = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                    edits=[EditSpec(offset=boff, s_edit=1.0, mask=geo)])).video.data
    d = np.abs(edit - base)
    lefts.append(d[..., :16].mean()); rights.append(d[..., 16:].mean())
print(f"A9 quick: ratio {np.mean(rights)/np.mean(lefts):.3f}", flush=True)

# motion pipeline (W5 e-3 recipe) with generative calibration
mcfg = LossConfig(kind="motion", gamma=2.0, lambda_m=5.0, flow_window=5, flow_det_eps=1e-3)
moff, _ = train_offset(model, None, small, mcfg, RefineConfig(extra_steps=4),
                       steps=50, lr=1e-3, batch_size=4, seed=0, attribute_name="motion")

def disp_ratio_measure(edited, base):
    try:
        return oracle_displacement(edited) / max(oracle_displacement(base), 1e-9)
    except OracleError:
        return 1.0

moff_cal, mg = calibrate_offset_gain_generative(model, moff, prompt, disp_ratio_measure,
                                                target=2.0, seeds=(0,1,2,3))
save_offset(moff_cal, ".dev_cache/motion2.tdof")
print(f"motion gain {mg:.2f} ({time.time()-t0:.0f}s)", flush=True)

ratios, ffm, ffb = [], [], []
for seed in range(16):
    v0 = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed)).video
    v1 = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                  edits=[EditSpec(offset=moff_cal, s_edit=1.0, mask=MaskSpec())])).video
    b1 = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                  edits=[EditSpec(offset=boff, s_edit=1.0, mask=MaskSpec())])).video
    try:
        ratios.append(oracle_displacement(v1)/max(oracle_displacement(v0),1e-9))
    except OracleError:
        ratios.append(np.nan)
    ffm.append(frame_perceptual_distance(v1, v0, frame=0))
    ffb.append(frame_perceptual_distance(b1, v0, frame=0))
    print(f"A8 seed {seed}: ratio {ratios[-1]:.2f}", flush=True)
print(f"A8: mean ratio {np.nanmean(ratios):.2f} ffm {np.mean(ffm):.4f} ffb {np.mean(ffb):.4f}", flush=True)
print(f"total {time.time()-t0:.0f}s")
