import numpy as np, torch, time
torch.set_num_threads(1)
from tokendial.backbone import load_checkpoint
from tokendial.offsets import MaskSpec, save_offset, InjectionConfig
from tokendial.guidance import GuidanceConfig, EditSpec, generate
from tokendial.synthworld import prompt_from_words, oracle_displacement, make_dataset, SceneDistribution, OracleError
from tokendial.perception import frame_perceptual_distance
from tokendial.trainer import LossConfig, RefineConfig, train_offset

model, _ = load_checkpoint(".dev_cache/backbone.tdbk")
clips = make_dataset(SceneDistribution(), 256, seed=11)
prompt = prompt_from_words(["disk", "white"])

BASE = {}
def base_video(seed):
    if seed not in BASE:
        BASE[seed] = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed)).video
    return BASE[seed]

def disp_ratio(off, gain, seeds):
    rs = []
    for seed in seeds:
        v0 = base_video(seed)
        v1 = generate(model, prompt, GuidanceConfig(
            s_txt=4.5, steps=32, seed=seed,
            edits=[EditSpec(offset=off.scaled(gain), s_edit=1.0, mask=MaskSpec())])).video
        try:
            rs.append(oracle_displacement(v1) / max(oracle_displacement(v0), 1e-9))
        except OracleError:
            rs.append(np.nan)
    return float(np.nanmean(rs))

def calibrate_by_generation(off, target, seeds=(0,1,2,3)):
    prev_g, prev_r = 0.0, 1.0
    for g in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0):
        r = disp_ratio(off, g, seeds)
        print(f"    gain {g}: ratio {r:.2f}", flush=True)
        if r >= target:
            if r > prev_r:
                return prev_g + (target - prev_r)/(r - prev_r)*(g - prev_g)
            return g
        prev_g, prev_r = g, r
    return prev_g

grid = [
    ("A50_all_t39",  50, tuple(range(6)), (0.3, 0.9)),
    ("B50_012_t39",  50, (0, 1, 2),       (0.3, 0.9)),
    ("C200_012_t26", 200, (0, 1, 2),      (0.2, 0.6)),
    ("D50_all_t26",  50, tuple(range(6)), (0.2, 0.6)),
]
for name, steps, layers, (tmin, tmax) in grid:
    t0 = time.time()
    lcfg = LossConfig(kind="motion", gamma=2.0, lambda_m=5.0)
    rcfg = RefineConfig(extra_steps=4, t_min=tmin, t_max=tmax)
    inj = InjectionConfig(point="post_block", layers=layers)
    off, _ = train_offset(model, None, clips, lcfg, rcfg, steps=steps, lr=1e-3,
                          batch_size=4, seed=0, injection=inj, attribute_name="motion")
    print(f"{name}: trained ({time.time()-t0:.0f}s), norms "
          f"{ {k: round(float(np.linalg.norm(v)),2) for k,v in off.entries.items()} }", flush=True)
    g = calibrate_by_generation(off, 2.0)
    cal = off.scaled(g)
    rs, ffs = [], []
    for seed in range(8):
        v0 = base_video(seed)
        v1 = generate(model, prompt, GuidanceConfig(
            s_txt=4.5, steps=32, seed=seed,
            edits=[EditSpec(offset=cal, s_edit=1.0, mask=MaskSpec())])).video
        try:
            rs.append(oracle_displacement(v1) / max(oracle_displacement(v0), 1e-9))
        except OracleError:
            rs.append(np.nan)
        ffs.append(frame_perceptual_distance(v1, v0, frame=0))
    print(f"{name}: gain {g:.2f} 8-seed disp ratio {np.nanmean(rs):.2f} "
          f"ff0 {np.mean(ffs):.4f} ({time.time()-t0:.0f}s)", flush=True)
    save_offset(cal, f".dev_cache/motion_{name}.tdof")
