import numpy as np, torch, time
torch.set_num_threads(1)
from tokendial.backbone import load_checkpoint
from tokendial.offsets import load_offset, MaskSpec, BoxGeometry
from tokendial.guidance import GuidanceConfig, EditSpec, generate, extract_attention_mask, MaskExtractionConfig
from tokendial.synthworld import prompt_from_words, SceneParams, render_video
from tokendial.patching import layout_for

model, _ = load_checkpoint(".dev_cache/backbone2.tdbk")
boff = load_offset(".dev_cache/brightness2.tdof")
prompt = prompt_from_words(["disk", "white"])

# attention-mask localization on a known render, several windows
params = SceneParams(shape_kind="disk", radius=0.16, brightness=0.95,
                     background_level=0.05, start_position=(0.17, 0.5), velocity=(0.0, 0.01))
video = render_video(params, 8, 32, 32)
probe = torch.from_numpy(video.data)
layout = layout_for(probe.shape, 2, 4)
inten = video.data.max(axis=0)
occ = np.zeros(layout.num_tokens)
for i, (fp, rp, cp) in enumerate(layout.coords()):
    patch = inten[2*fp:2*fp+2, 4*rp:4*rp+4, 4*cp:4*cp+4]
    occ[i] = (patch > params.background_level + 0.2).mean()

for w in [(0.0, 0.2), (0.2, 0.5), (0.5, 0.8), (0.6, 0.9)]:
    cfg = GuidanceConfig(s_txt=4.5, steps=32, seed=0,
                         mask_extraction=MaskExtractionConfig(window=w, power=2.0))
    mask = extract_attention_mask(model, params.prompt(), 0, cfg, probe_video=probe)
    on = mask.values[occ > 0.3].mean()
    off_v = mask.values[occ == 0.0].mean()
    print(f"window {w}: on-shape {on:.3f} off-shape {off_v:.3f} ratio {on/max(off_v,1e-9):.2f}", flush=True)

# disjoint-edit locality
left = MaskSpec(source="user_geometry", geometry=BoxGeometry(box=(0.0, 0.0, 0.5, 1.0), edge=0.05))
right = MaskSpec(source="user_geometry", geometry=BoxGeometry(box=(0.5, 0.0, 1.0, 1.0), edge=0.05))
diffs = []
for seed in (0, 1, 2):
    both = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                    edits=[EditSpec(offset=boff, s_edit=1.0, mask=left),
                           EditSpec(offset=boff, s_edit=-1.0, mask=right)])).video.data
    lonly = generate(model, prompt, GuidanceConfig(s_txt=4.5, steps=32, seed=seed,
                     edits=[EditSpec(offset=boff, s_edit=1.0, mask=left)])).video.data
    diffs.append(float(np.abs(both[..., :16] - lonly[..., :16]).mean()))
print("disjoint-edit left-region diffs:", [round(d, 4) for d in diffs], flush=True)

# generation-probe attention mask (default path) on a generated video
cfg = GuidanceConfig(s_txt=4.5, steps=32, seed=1)
m = extract_attention_mask(model, prompt, 0, cfg)
print("gen-probe mask stats: min", m.values.min(), "mean", round(m.values.mean(), 3), "max", m.values.max(), flush=True)
