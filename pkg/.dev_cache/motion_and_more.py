import numpy as np, torch, time, json
torch.set_num_threads(1)
from tokendial.backbone import load_checkpoint
from tokendial.offsets import load_offset, save_offset, MaskSpec, BoxGeometry
from tokendial.guidance import GuidanceConfig, EditSpec, generate
from tokendial.synthworld import prompt_from_words, oracle_brightness, oracle_displacement, \
    make_dataset, SceneDistribution, SceneParams, bright_dim_exemplars, OracleError
from tokendial.slidereval import spearman, monotonicity
from tokendial.perception import load_encoder, target_direction_from_exemplars, frame_perceptual_distance
from tokendial.trainer import LossConfig, RefineConfig, train_offset, calibrate_offset_gain, \
    motion_effect_fn, appearance_effect_fn

t0 = time.time()
model, _ = load_checkpoint(".dev_cache/backbone.tdbk")
enc = load_encoder(".dev_cache/encoder.tden")
clips = make_dataset(SceneDistribution(), 256, seed=11)
prompt = prompt_from_words(["disk", "white"])

# ---- calibrated brightness offset (target 1.0 * gap)
hi, lo = bright_dim_exemplars(SceneParams(), n=8, seed=0)
d_tgt = target_direction_from_exemplars(enc, hi, lo)
gap = float(np.linalg.norm(np.mean([enc.encode(v) for v in hi], 0) - np.mean([enc.encode(v) for v in lo], 0)))
off_raw = load_offset(".dev_cache/brightness.tdof")
bright, g = calibrate_offset_gain(model, off_raw, clips, appearance_effect_fn(enc, d_tgt),
                                  target=1.0 * gap, refine_cfg=RefineConfig(extra_steps=4), seed=0)
print(f"brightness calibration gain: {g:.2f} ({time.time()-t0:.0f}s)", flush=True)
save_offset(bright, ".dev_cache/brightness_cal.tdof")

# ---- A9 mask locality: left-half box mask at s=1, 8 seeds
geo = MaskSpec(source="user_geometry", geometry=BoxGeometry(box=(0.0, 0.0, 0.5, 1.0), edge=0.05))
ratios = []
for seed in range(8):
    base = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed)).video.data
    edit = generate(model, prompt, GuidanceConfig(
        s_txt=4.5, steps=32, seed=seed,
        edits=[EditSpec(offset=bright, s_edit=1.0, mask=geo)])).video.data
    diff = np.abs(edit - base)
    left = diff[:, :, :, :16].mean(); right = diff[:, :, :, 16:].mean()
    ratios.append(right / max(left, 1e-9))
    print(f"A9 seed {seed}: left {left:.4f} right {right:.4f} ratio {right/left:.3f}", flush=True)
print("A9 mean ratio:", np.mean(ratios), flush=True)

# ---- A10 resolution transfer: 12x48x48, 8 seeds
rhos48 = []
for seed in range(8):
    vals = []
    for s in (0.0, 0.25, 0.5, 0.75, 1.0):
        cfg = GuidanceConfig(s_txt=4.5, steps=32, seed=seed, frames=12, height=48, width=48,
                             edits=[EditSpec(offset=bright, s_edit=s, mask=MaskSpec())])
        v = generate(model, prompt, cfg).video
        try: vals.append(oracle_brightness(v))
        except OracleError: vals.append(np.nan)
    rho = spearman([0,0.25,0.5,0.75,1], vals)
    rhos48.append(rho)
    print(f"A10 seed {seed}: {[round(v,3) for v in vals]} rho {rho:.2f}", flush=True)
print("A10 mean Spearman at 12x48x48:", np.mean(rhos48), f"({time.time()-t0:.0f}s)", flush=True)

# ---- motion offset: train + calibrate
lcfg = LossConfig(kind="motion", gamma=2.0, lambda_m=5.0)
moff, log = train_offset(model, None, clips, lcfg, RefineConfig(extra_steps=4),
                         steps=200, lr=1e-3, batch_size=4, seed=0, attribute_name="motion",
                         progress=lambda s, l, el: print(f"  motion step {s}: {l:.5f} ({el:.0f}s)", flush=True))
print("motion offset norms:", {k: round(float(np.linalg.norm(v)),3) for k,v in moff.entries.items()}, flush=True)
moff_cal, gm = calibrate_offset_gain(model, moff, clips, motion_effect_fn(), target=2.0,
                                     refine_cfg=RefineConfig(extra_steps=4), seed=0)
print(f"motion calibration gain: {gm:.2f}", flush=True)
save_offset(moff_cal, ".dev_cache/motion_cal.tdof")

# ---- A8 eval: displacement ratio s=1 vs s=0, 16 seeds + frame-0 drift
ratios, ff_m, ff_b = [], [], []
for seed in range(16):
    v0 = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed)).video
    v1 = generate(model, prompt, GuidanceConfig(
        s_txt=4.5, steps=32, seed=seed,
        edits=[EditSpec(offset=moff_cal, s_edit=1.0, mask=MaskSpec())])).video
    b1 = generate(model, prompt, GuidanceConfig(
        s_txt=4.5, steps=32, seed=seed,
        edits=[EditSpec(offset=bright, s_edit=1.0, mask=MaskSpec())])).video
    try:
        d0, d1 = oracle_displacement(v0), oracle_displacement(v1)
        r = d1 / max(d0, 1e-9)
    except OracleError:
        r = np.nan
    ratios.append(r)
    ff_m.append(frame_perceptual_distance(v1, v0, frame=0))
    ff_b.append(frame_perceptual_distance(b1, v0, frame=0))
    print(f"A8 seed {seed}: d0 {d0:.2f} d1 {d1:.2f} ratio {r:.2f} ff_motion {ff_m[-1]:.4f} ff_bright {ff_b[-1]:.4f}", flush=True)
print("A8 mean ratio:", np.nanmean(ratios), "mean ff motion:", np.mean(ff_m), "mean ff bright:", np.mean(ff_b), flush=True)
print(f"total {time.time()-t0:.0f}s")
