import numpy as np, torch, time
torch.set_num_threads(1)
from tokendial.backbone import load_checkpoint
from tokendial.offsets import MaskSpec, save_offset, InjectionConfig, TokenOffsetSet
from tokendial.guidance import GuidanceConfig, EditSpec, generate
from tokendial.synthworld import prompt_from_words, oracle_displacement, make_dataset, SceneDistribution, OracleError
from tokendial.trainer import LossConfig, RefineConfig, train_offset

model, _ = load_checkpoint(".dev_cache/backbone3.tdbk")
prompt = prompt_from_words(["disk", "white"])

# "green-screen" analog: plain near-black background, bright shapes
green = SceneDistribution(background_level=(0.0, 0.02), brightness=(0.55, 1.0))
clips_green = make_dataset(green, 192, seed=31)
clips_reg = make_dataset(SceneDistribution(), 192, seed=11)

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
    return float(np.nanmean(rs))

def snapshot_ladder(name, clips, point="post_block"):
    inj = InjectionConfig(point=point, layers=tuple(range(6)))
    lcfg = LossConfig(kind="motion", gamma=2.0, lambda_m=5.0, flow_window=5, flow_det_eps=1e-3)
    rcfg = RefineConfig(extra_steps=4, t_min=0.15, t_max=0.5)
    for steps in (10, 20, 40):
        off, _ = train_offset(model, None, clips, lcfg, rcfg, steps=steps, lr=1e-3,
                              batch_size=4, seed=0, injection=inj, attribute_name="motion")
        ladder = [f"{g}:{ratio_at(off, g):.2f}" for g in (1.0, 2.0, 4.0, 8.0, 16.0)]
        print(f"{name} steps {steps}: {ladder}", flush=True)
        save_offset(off, f".dev_cache/motion_g_{name}_{steps}.tdof")

snapshot_ladder("green", clips_green)
snapshot_ladder("reg", clips_reg)
snapshot_ladder("green_attn", clips_green, point="post_self_attention_residual")
