import init, { scaling_trajectory, pmax_curve, tangent_spectrum } from "./pkg/slocc_wasm.js";

const PAD = { l: 56, r: 12, t: 12, b: 28 };

function plot(canvas, xs, ys, { logY = false, bars = false, xLabel = "", yLabel = "" } = {}) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height;
  ctx.clearRect(0, 0, w, h);
  const ty = logY ? (y) => Math.log10(Math.max(y, 1e-300)) : (y) => y;
  const yv = ys.map(ty).filter(Number.isFinite);
  let y0 = Math.min(...yv), y1 = Math.max(...yv);
  if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
  const x0 = Math.min(...xs), x1 = Math.max(...xs) === x0 ? x0 + 1 : Math.max(...xs);
  const px = (x) => PAD.l + ((x - x0) / (x1 - x0)) * (w - PAD.l - PAD.r);
  const py = (y) => h - PAD.b - ((ty(y) - y0) / (y1 - y0)) * (h - PAD.t - PAD.b);

  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(PAD.l, PAD.t); ctx.lineTo(PAD.l, h - PAD.b); ctx.lineTo(w - PAD.r, h - PAD.b);
  ctx.stroke();
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  const fmt = (v) => (logY ? "1e" + v.toFixed(0) : v.toPrecision(3));
  ctx.fillText(fmt(y1), 4, PAD.t + 8);
  ctx.fillText(fmt(y0), 4, h - PAD.b);
  ctx.fillText(xLabel, w / 2, h - 8);
  ctx.fillText(yLabel, 4, h / 2);

  ctx.strokeStyle = ctx.fillStyle = "#2660a4";
  if (bars) {
    const bw = Math.max(2, (w - PAD.l - PAD.r) / xs.length - 2);
    xs.forEach((x, i) => {
      const top = py(ys[i]);
      ctx.fillRect(px(x) - bw / 2, top, bw, h - PAD.b - top);
    });
  } else {
    ctx.beginPath();
    xs.forEach((x, i) => (i ? ctx.lineTo(px(x), py(ys[i])) : ctx.moveTo(px(x), py(ys[i]))));
    ctx.stroke();
  }
}

function wire(id, run) {
  const root = document.getElementById(id);
  const out = root.querySelector(".out");
  const field = (name) => root.querySelector(`[name=${name}]`).value;
  const go = () => {
    out.classList.remove("err");
    try {
      out.textContent = run(field, root.querySelector("canvas"));
    } catch (e) {
      out.classList.add("err");
      out.textContent = String(e.message ?? e);
    }
  };
  root.querySelector("button").addEventListener("click", go);
  go();
}

await init();

wire("scaling", (f, canvas) => {
  const r = JSON.parse(scaling_trajectory(f("kind"), +f("n"), +f("seed"), 2000));
  const ys = r.norm_trajectory;
  plot(canvas, ys.map((_, i) => i), ys, { logY: r.status === "null_cone", xLabel: "sweep", yLabel: "norm" });
  return `${r.status} after ${r.iterations} sweeps, final norm ${ys[ys.length - 1].toPrecision(8)}, ` +
    `marginal deviation ${r.final_deviation.toExponential(2)}`;
});

wire("pmax", (f, canvas) => {
  const r = JSON.parse(pmax_curve(+f("n"), +f("smin"), +f("smax"), 200));
  plot(canvas, r.s.map(Math.log10), r.p_max, { xLabel: "log10 s", yLabel: "p_max" });
  const at2 = JSON.parse(pmax_curve(+f("n"), 2, 2, 2)).p_max[0];
  return `p_max at s = 2: ${at2}`;
});

wire("spectrum", (f, canvas) => {
  const r = JSON.parse(tangent_spectrum(f("kind"), +f("n"), +f("seed")));
  const sv = r.singular_values;
  plot(canvas, sv.map((_, i) => i + 1), sv, { bars: true, xLabel: "index", yLabel: "sigma" });
  return `lie_dim ${r.lie_dim} (cutoff ${r.cutoff} x sigma_max)\n` + sv.map((s) => s.toExponential(3)).join("  ");
});
