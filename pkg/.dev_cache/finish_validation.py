import numpy as np, torch, time
torch.set_num_threads(1)
from tokendial.backbone import load_checkpoint
from tokendial.offsets import load_offset, save_offset, MaskSpec, BoxGeometry
from tokendial.guidance import GuidanceConfig, EditSpec, generate
from tokendial.synthworld import prompt_from_words, oracle_brightness, oracle_displacement, \
    OracleError, make_dataset, SceneDistribution
from tokendial.slidereval import spearman, monotonicity
from tokendial.perception import frame_perceptual_distance
from tokendial.trainer import LossConfig, RefineConfig, train_offset, calibrate_offset_gain_generative

t0 = time.time()
model, _ = load_checkpoint(".dev_cache/backbone2.tdbk")
clips = make_dataset(SceneDistribution(), 256, seed=11)
prompt = prompt_from_words(["disk", "white"])
raw = load_offset(".dev_cache/brightness2.tdof").scaled(1.0 / 57.5)
boff = raw.scaled(27.2)
save_offset(boff, ".dev_cache/brightness2_cal.tdof")

# A9 locality
geo = MaskSpec(source="user_geometry", geometry=BoxGeometry(box=(0.0, 0.0, 0.5, 1.0), edge=0.05))
lefts, rights = [], []
for seed in range(8):
    base = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed)).video.data
    edit = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                    edits=[EditSpec(offset=boff, s_edit=1.0, mask=geo)])).video.data
    d = np.abs(edit - base)
    lefts.append(d[..., :16].mean()); rights.append(d[..., 16:].mean())
print(f"A9: ratio {np.mean(rights)/np.mean(lefts):.3f} ({time.time()-t0:.0f}s)", flush=True)

# A10 transfer at 12x48x48
strengths = [0.0, 0.25, 0.5, 0.75, 1.0]
rhos = []
for seed in range(8):
    curve = []
    for s in strengths:
        v = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                     frames=12, height=48, width=48,
                     edits=[EditSpec(offset=boff, s_edit=s, mask=MaskSpec())])).video
        try: curve.append(oracle_brightness(v))
        except OracleError: curve.append(np.nan)
    rhos.append(0.0 if np.isnan(curve).any() else spearman(strengths, curve))
print(f"A10: mean rho {np.mean(rhos):.3f} ({time.time()-t0:.0f}s)", flush=True)

# motion: train + generative calibration + A8
mcfg = LossConfig(kind="motion", gamma=2.0, lambda_m=5.0, flow_window=5, flow_det_eps=1e-3)
moff, _ = train_offset(model, None, clips, mcfg, RefineConfig(extra_steps=4),
                       steps=50, lr=1e-3, batch_size=4, seed=0, attribute_name="motion")
def disp_ratio(edited, base):
    try: return oracle_displacement(edited) / max(oracle_displacement(base), 1e-9)
    except OracleError: return 1.0
moff_cal, mg = calibrate_offset_gain_generative(model, moff, prompt, disp_ratio, target=2.0, seeds=(0,1,2,3))
save_offset(moff_cal, ".dev_cache/motion2_cal.tdof")
print(f"motion gain {mg:.2f} ({time.time()-t0:.0f}s)", flush=True)

ratios, ffm, ffb = [], [], []
for seed in range(16):
    v0 = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed)).video
    v1 = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                  edits=[EditSpec(offset=moff_cal, s_edit=1.0, mask=MaskSpec())])).video
    b1 = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                  edits=[EditSpec(offset=boff, s_edit=1.0, mask=MaskSpec())])).video
    try: ratios.append(oracle_displacement(v1)/max(oracle_displacement(v0),1e-9))
    except OracleError: ratios.append(np.nan)
    ffm.append(frame_perceptual_distance(v1, v0, frame=0))
    ffb.append(frame_perceptual_distance(b1, v0, frame=0))
print(f"A8: ratios {[None if np.isnan(r) else round(r,2) for r in ratios]}", flush=True)
print(f"A8: mean {np.nanmean(ratios):.2f} ffm {np.mean(ffm):.4f} ffb {np.mean(ffb):.4f} ({time.time()-t0:.0f}s)", flush=True)
