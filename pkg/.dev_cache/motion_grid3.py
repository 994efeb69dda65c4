import numpy as np, torch, time
torch.set_num_threads(1)
from tokendial.backbone import load_checkpoint
from tokendial.offsets import MaskSpec, save_offset
from tokendial.guidance import GuidanceConfig, EditSpec, generate
from tokendial.synthworld import prompt_from_words, oracle_displacement, make_dataset, SceneDistribution, OracleError
from tokendial.trainer import LossConfig, RefineConfig, train_offset

model, _ = load_checkpoint(".dev_cache/backbone2.tdbk")
clips = make_dataset(SceneDistribution(), 256, seed=11)
prompt = prompt_from_words(["disk", "white"])

BASE = {}
def base_video(seed):
    if seed not in BASE:
        BASE[seed] = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed)).video
    return BASE[seed]

def ratio_at(off, gain, seeds=range(4)):
    rs = []
    for seed in seeds:
        v1 = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                      edits=[EditSpec(offset=off.scaled(gain), s_edit=1.0, mask=MaskSpec())])).video
        try: rs.append(oracle_displacement(v1) / max(oracle_displacement(base_video(seed)), 1e-9))
        except OracleError: rs.append(np.nan)
    return float(np.nanmean(rs)), int(np.isnan(rs).sum())

grid = [
    ("t15_50_s50_g2", (0.15, 0.5), 50, 2.0),
    ("t15_50_s100_g2", (0.15, 0.5), 100, 2.0),
    ("t10_40_s50_g3", (0.10, 0.4), 50, 3.0),
]
for name, (tmin, tmax), steps, gamma in grid:
    t0 = time.time()
    lcfg = LossConfig(kind="motion", gamma=gamma, lambda_m=5.0, flow_window=5, flow_det_eps=1e-3)
    off, _ = train_offset(model, None, clips, lcfg,
                          RefineConfig(extra_steps=4, t_min=tmin, t_max=tmax),
                          steps=steps, lr=1e-3, batch_size=4, seed=0, attribute_name="motion")
    line = []
    for g in (0.5, 1.0, 2.0, 4.0, 8.0):
        r, fails = ratio_at(off, g)
        line.append(f"{g}:{r:.2f}({fails})")
    print(f"{name}: {line} ({time.time()-t0:.0f}s)", flush=True)
    save_offset(off, f".dev_cache/motion3_{name}.tdof")
