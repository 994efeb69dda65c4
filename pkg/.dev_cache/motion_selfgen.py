import numpy as np, torch, time
torch.set_num_threads(1)
from tokendial.backbone import load_checkpoint
from tokendial.offsets import MaskSpec, save_offset, InjectionConfig
from tokendial.guidance import GuidanceConfig, EditSpec, generate
from tokendial.synthworld import prompt_from_words, oracle_displacement, OracleError, \
    ClipRecord, SceneParams, PALETTE, COLOR_WORDS, SHAPE_WORDS
from tokendial.perception import frame_perceptual_distance
from tokendial.trainer import LossConfig, RefineConfig, train_offset

model, _ = load_checkpoint(".dev_cache/backbone.tdbk")
prompt_words = [("disk", c) for c in COLOR_WORDS] + [("square", c) for c in COLOR_WORDS]

# self-generated training clips from the backbone itself
t0 = time.time()
clips = []
rng = np.random.default_rng(7)
for i in range(48):
    shape, color = prompt_words[int(rng.integers(0, len(prompt_words)))]
    pr = prompt_from_words([shape, color])
    v = generate(model, pr, GuidanceConfig(s_txt=4.5, steps=32, seed=int(rng.integers(0, 10_000)))).video
    clips.append(ClipRecord(clip_id=f"gen{i:03d}", video=v, prompt=pr, params=SceneParams()))
print(f"generated {len(clips)} training clips in {time.time()-t0:.0f}s", flush=True)

BASE = {}
prompt = prompt_from_words(["disk", "white"])
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

for name, steps, gamma, tmin, tmax in [("S50_g2", 50, 2.0, 0.3, 0.9),
                                       ("S150_g2", 150, 2.0, 0.3, 0.9)]:
    t1 = time.time()
    lcfg = LossConfig(kind="motion", gamma=gamma, lambda_m=5.0)
    rcfg = RefineConfig(extra_steps=4, t_min=tmin, t_max=tmax)
    off, _ = train_offset(model, None, clips, lcfg, rcfg, steps=steps, lr=1e-3,
                          batch_size=4, seed=0, attribute_name="motion")
    print(f"{name}: trained {time.time()-t1:.0f}s norms "
          f"{ {k: round(float(np.linalg.norm(v)),2) for k,v in off.entries.items()} }", flush=True)
    for g in (0.5, 1.0, 2.0, 4.0):
        print(f"    gain {g}: ratio {disp_ratio(off, g, range(4)):.2f}", flush=True)
    save_offset(off, f".dev_cache/motion_self_{name}.tdof")
