import numpy as np, torch, time
torch.set_num_threads(1)
from tokendial.backbone import load_checkpoint
from tokendial.offsets import MaskSpec, save_offset, BoxGeometry, InjectionConfig
from tokendial.guidance import GuidanceConfig, EditSpec, generate
from tokendial.synthworld import prompt_from_words, oracle_brightness, make_dataset, \
    SceneDistribution, SceneParams, bright_dim_exemplars, OracleError
from tokendial.slidereval import spearman, monotonicity
from tokendial.perception import load_encoder, target_direction_from_exemplars
from tokendial.trainer import LossConfig, RefineConfig, train_offset, \
    calibrate_offset_gain, appearance_effect_fn

model, _ = load_checkpoint(".dev_cache/backbone3.tdbk")
enc = load_encoder(".dev_cache/encoder3.tden")
clips = make_dataset(SceneDistribution(), 256, seed=11)
prompt = prompt_from_words(["disk", "white"])
hi, lo = bright_dim_exemplars(SceneParams(), n=8, seed=0)
d_tgt = target_direction_from_exemplars(enc, hi, lo)
gap = float(np.linalg.norm(np.mean([enc.encode(v) for v in hi],0) - np.mean([enc.encode(v) for v in lo],0)))
geo = MaskSpec(source="user_geometry", geometry=BoxGeometry(box=(0.0, 0.0, 0.5, 1.0), edge=0.05))
strengths = [0.0, 0.25, 0.5, 0.75, 1.0]

for layers in [(3, 4, 5), (4, 5)]:
    t0 = time.time()
    inj = InjectionConfig(point="post_block", layers=layers)
    off, _ = train_offset(model, enc, clips,
                          LossConfig(kind="appearance", lambda_a=0.5, d_tgt=d_tgt),
                          RefineConfig(extra_steps=4), steps=300, lr=1e-3, batch_size=4,
                          seed=0, injection=inj, attribute_name="brightness")
    cal, g = calibrate_offset_gain(model, off, clips, appearance_effect_fn(enc, d_tgt),
                                   target=0.5 * gap, refine_cfg=RefineConfig(extra_steps=4), seed=0)
    lefts, rights, rhos, monos = [], [], [], []
    for seed in range(8):
        base = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed)).video.data
        edit = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                        edits=[EditSpec(offset=cal, s_edit=1.0, mask=geo)])).video.data
        d = np.abs(edit - base)
        lefts.append(d[..., :16].mean()); rights.append(d[..., 16:].mean())
        curve = []
        for s in strengths:
            v = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                         edits=[EditSpec(offset=cal, s_edit=s, mask=MaskSpec())])).video
            try: curve.append(oracle_brightness(v))
            except OracleError: curve.append(np.nan)
        if np.isnan(curve).any(): rhos.append(0.0); monos.append(0.0)
        else: rhos.append(spearman(strengths, curve)); monos.append(monotonicity(curve))
    print(f"layers {layers}: gain {g:.1f} A9 {np.mean(rights)/np.mean(lefts):.3f} "
          f"rho {np.mean(rhos):.3f} mono {np.mean(monos):.3f} ({time.time()-t0:.0f}s)", flush=True)
    save_offset(cal, f".dev_cache/bright3_l{''.join(map(str, layers))}.tdof")
