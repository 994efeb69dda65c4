import numpy as np, torch, time
torch.set_num_threads(1)
from tokendial.backbone import load_checkpoint
from tokendial.offsets import load_offset, save_offset, MaskSpec, BoxGeometry, TokenOffsetSet, InjectionConfig
from tokendial.guidance import GuidanceConfig, EditSpec, generate
from tokendial.synthworld import prompt_from_words, oracle_brightness, make_dataset, SceneDistribution, \
    SceneParams, bright_dim_exemplars
from tokendial.slidereval import spearman, monotonicity
from tokendial.perception import load_encoder, target_direction_from_exemplars
from tokendial.trainer import RefineConfig, calibrate_offset_gain, appearance_effect_fn

model, _ = load_checkpoint(".dev_cache/backbone.tdbk")
enc = load_encoder(".dev_cache/encoder.tden")
clips = make_dataset(SceneDistribution(), 256, seed=11)
prompt = prompt_from_words(["disk", "white"])
hi, lo = bright_dim_exemplars(SceneParams(), n=8, seed=0)
d_tgt = target_direction_from_exemplars(enc, hi, lo)
gap = float(np.linalg.norm(np.mean([enc.encode(v) for v in hi],0) - np.mean([enc.encode(v) for v in lo],0)))
raw = load_offset(".dev_cache/brightness.tdof")

def subset(off, layers):
    return TokenOffsetSet(off.attribute_name, off.dim,
                          {k: off.entries[k] for k in layers},
                          InjectionConfig(point=off.injection.point, layers=tuple(layers)),
                          dict(off.training_meta))

geo = MaskSpec(source="user_geometry", geometry=BoxGeometry(box=(0.0, 0.0, 0.5, 1.0), edge=0.05))
strengths = [0.0, 0.25, 0.5, 0.75, 1.0]

for layers in [(5,), (4, 5), (3, 4, 5)]:
    sub = subset(raw, layers)
    cal, g = calibrate_offset_gain(model, sub, clips, appearance_effect_fn(enc, d_tgt),
                                   target=gap, refine_cfg=RefineConfig(extra_steps=4), seed=0)
    # A9 locality
    lefts, rights = [], []
    for seed in range(8):
        base = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed)).video.data
        edit = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                        edits=[EditSpec(offset=cal, s_edit=1.0, mask=geo)])).video.data
        d = np.abs(edit - base)
        lefts.append(d[:, :, :, :16].mean()); rights.append(d[:, :, :, 16:].mean())
    ratio = np.mean([r/l for r, l in zip(rights, lefts)])
    # quick sweep quality
    rhos, monos = [], []
    for seed in range(8):
        vals = [oracle_brightness(generate(model, prompt, GuidanceConfig(
            s_txt=4.5, steps=32, seed=seed,
            edits=[EditSpec(offset=cal, s_edit=s, mask=MaskSpec())])).video) for s in strengths]
        rhos.append(spearman(strengths, vals)); monos.append(monotonicity(vals))
    print(f"layers {layers}: gain {g:.1f} A9 ratio {ratio:.3f} "
          f"rho {np.mean(rhos):.3f} mono {np.mean(monos):.3f}", flush=True)
    save_offset(cal, f".dev_cache/bright_sub{''.join(map(str,layers))}.tdof")
