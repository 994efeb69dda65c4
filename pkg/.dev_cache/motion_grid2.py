import numpy as np, torch, time
torch.set_num_threads(1)
from tokendial.backbone import load_checkpoint
from tokendial.offsets import MaskSpec, save_offset
from tokendial.guidance import GuidanceConfig, EditSpec, generate
from tokendial.synthworld import prompt_from_words, oracle_displacement, make_dataset, SceneDistribution, OracleError
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
        v1 = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                      edits=[EditSpec(offset=off.scaled(gain), s_edit=1.0, mask=MaskSpec())])).video
        try:
            rs.append(oracle_displacement(v1) / max(oracle_displacement(base_video(seed)), 1e-9))
        except OracleError:
            rs.append(np.nan)
    return float(np.nanmean(rs))

grid = [
    ("W5_e3_g2_s50",  5, 1e-3, 2.0, 50),
    ("W5_e4_g2_s50",  5, 1e-4, 2.0, 50),
    ("W3_e3_g2_s50",  3, 1e-3, 2.0, 50),
    ("W5_e3_g4_s25",  5, 1e-3, 4.0, 25),
]
for name, window, eps, gamma, steps in grid:
    t0 = time.time()
    lcfg = LossConfig(kind="motion", gamma=gamma, lambda_m=5.0,
                      flow_window=window, flow_det_eps=eps)
    off, _ = train_offset(model, None, clips, lcfg, RefineConfig(extra_steps=4),
                          steps=steps, lr=1e-3, batch_size=4, seed=0,
                          attribute_name="motion")
    line = []
    for g in (0.5, 1.0, 2.0, 4.0):
        line.append(f"{g}:{disp_ratio(off, g, range(4)):.2f}")
    print(f"{name}: ratios {line} ({time.time()-t0:.0f}s)", flush=True)
    save_offset(off, f".dev_cache/motion_{name}.tdof")
