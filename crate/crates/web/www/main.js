import init, { spring_loop, field_loop, spectrum } from "./pkg/hystlab_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const status = (msg) => { $("status").textContent = msg; };

function draw(view, title) {
  const canvas = $("plot");
  const ctx = canvas.getContext("2d");
  const u = view.u, y = view.y;
  const pad = 50;
  const [u0, u1] = [Math.min(...u), Math.max(...u)];
  const [y0, y1] = [Math.min(...y), Math.max(...y)];
  const sx = (canvas.width - 2 * pad) / ((u1 - u0) || 1);
  const sy = (canvas.height - 2 * pad) / ((y1 - y0) || 1);
  const px = (v) => pad + (v - u0) * sx;
  const py = (v) => canvas.height - pad - (v - y0) * sy;

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, canvas.width - 2 * pad, canvas.height - 2 * pad);
  ctx.fillStyle = "#333";
  ctx.fillText(u0.toPrecision(3), pad, canvas.height - pad + 15);
  ctx.fillText(u1.toPrecision(3), canvas.width - pad - 30, canvas.height - pad + 15);
  ctx.fillText(y0.toPrecision(3), 5, canvas.height - pad);
  ctx.fillText(y1.toPrecision(3), 5, pad + 10);
  ctx.fillText("u", canvas.width / 2, canvas.height - 10);
  ctx.fillText("y", 10, canvas.height / 2);
  ctx.fillText(title, pad, pad - 10);

  ctx.strokeStyle = "#c03";
  ctx.beginPath();
  ctx.moveTo(px(u[0]), py(y[0]));
  for (let i = 1; i < u.length; i++) ctx.lineTo(px(u[i]), py(y[i]));
  ctx.stroke();

  status(`area ${view.area.toExponential(4)}, normalized ${view.normalized_area.toFixed(4)}, closure gap ${view.closure_gap.toExponential(2)}`);
}

function run(label, f) {
  status(`${label}...`);
  // let the status repaint before the blocking call
  setTimeout(() => {
    try {
      const t = performance.now();
      f();
      $("status").textContent += ` (${((performance.now() - t) / 1000).toFixed(2)} s)`;
    } catch (e) {
      status(`error: ${e.message ?? e}`);
    }
  }, 10);
}

$("spring-run").onclick = () => run("integrating", () => {
  const sys = $("spring-system").value;
  const view = spring_loop(sys, num("spring-c"), num("spring-k"), num("spring-omega"), 1.0);
  draw(view, `${sys}, omega = ${num("spring-omega")}`);
});

$("field-run").onclick = () => run("integrating", () => {
  const linear = $("field-linear").checked;
  const view = field_loop(linear, num("field-nu"), num("field-nodes"), num("field-omega"), 0.001);
  draw(view, `${linear ? "linearized" : "nonlinear"} field, omega = ${num("field-omega")}`);
});

$("spec-run").onclick = () => run("solving", () => {
  const rows = spectrum(num("spec-nu"), num("spec-nodes"), num("spec-modes"));
  let html = "<tr><th>mode</th><th>analytic</th><th>numeric</th><th>error</th></tr>";
  const c = (re, im) => `${re.toFixed(5)} ${im < 0 ? "-" : "+"} ${Math.abs(im).toFixed(5)}i`;
  for (let i = 0; i < rows.length; i += 6) {
    html += `<tr><td>${rows[i]}</td><td>${c(rows[i + 1], rows[i + 2])}</td><td>${c(rows[i + 3], rows[i + 4])}</td><td>${rows[i + 5].toExponential(2)}</td></tr>`;
  }
  $("spec-table").innerHTML = html;
  status(`${rows.length / 6} eigenvalues paired`);
});

await init();
status("ready");
