import init, { alexander, invariants, sw_surgery, examples } from "./pkg/kirbykit_web.js";

const $ = (id) => document.getElementById(id);

function show(out, f) {
  out.classList.remove("error");
  try {
    return f();
  } catch (e) {
    out.classList.add("error");
    out.textContent = String(e.message ?? e);
    return null;
  }
}

// Bar chart of (exponent, coefficient) pairs, centred on exponent 0.
function chart(canvas, points) {
  const g = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  g.clearRect(0, 0, w, h);
  if (!points.length) return;
  const span = Math.max(1, ...points.map((p) => Math.abs(p.exponent)));
  const top = Math.max(1, ...points.map((p) => Math.abs(p.coefficient)));
  const mid = h / 2;
  const step = (w - 40) / (2 * span + 1);
  g.strokeStyle = "#999";
  g.beginPath();
  g.moveTo(0, mid);
  g.lineTo(w, mid);
  g.stroke();
  g.font = "11px sans-serif";
  g.textAlign = "center";
  for (const p of points) {
    const x = 20 + (p.exponent + span) * step + step / 2;
    const bar = (p.coefficient / top) * (mid - 20);
    g.fillStyle = p.coefficient > 0 ? "#3a6ea5" : "#c0504d";
    g.fillRect(x - step / 4, mid - Math.max(bar, 0), step / 2, Math.abs(bar));
    g.fillStyle = "#222";
    g.fillText(String(p.coefficient), x, p.coefficient > 0 ? mid - bar - 4 : mid - bar + 12);
    g.fillText(String(p.exponent), x, h - 4);
  }
}

function runAlexander() {
  const out = $("alex-out");
  const r = show(out, () => JSON.parse(alexander($("knot").value)));
  if (!r) return chart($("alex-chart"), []);
  out.textContent =
    `Δ(t) = ${r.alexander}\n` +
    `Fox calculus agrees: ${r.agreement}\n` +
    `crossings ${r.crossings}, Seifert genus bound ${r.genus_bound}, signature ${r.signature}`;
  chart($("alex-chart"), r.coefficients.map((c) => ({ exponent: c.exponent, coefficient: Number(c.coefficient) })));
}

function runInvariants() {
  const out = $("inv-out");
  const r = show(out, () => JSON.parse(invariants($("kby").value)));
  if (r) out.textContent = r.summary;
}

function runSw() {
  const out = $("sw-out");
  const r = show(out, () => JSON.parse(sw_surgery($("sw-knot").value, Number($("sw-class").value))));
  if (!r) return chart($("sw-chart"), []);
  out.textContent =
    `Δ(t) = ${r.alexander}\nSW = ${r.sw}\n` +
    `basic classes: ${r.basic_classes.map((c) => `${c.class} (${c.coefficient})`).join(", ")}\n` +
    `distinguished from K3: ${r.fake_pair}`;
  chart($("sw-chart"), r.basic_classes.map((c) => ({ exponent: c.exponent, coefficient: Number(c.coefficient) })));
}

async function main() {
  await init();
  const list = JSON.parse(examples());
  const select = $("example");
  for (const e of list) select.add(new Option(e.name, e.text));
  const load = () => {
    $("kby").value = select.value;
    runInvariants();
  };
  select.addEventListener("change", load);
  $("alex-run").addEventListener("click", runAlexander);
  $("inv-run").addEventListener("click", runInvariants);
  $("sw-run").addEventListener("click", runSw);
  $("status").textContent = "Ready.";
  load();
  runAlexander();
  runSw();
}

main().catch((e) => {
  $("status").textContent = `Failed to load: ${e}`;
  $("status").classList.add("error");
});
