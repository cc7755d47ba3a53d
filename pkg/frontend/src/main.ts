// Browser shell: wires the app state machine to the DOM.

import { ArenaApp } from "./app.js";

const SERVICE = (window as unknown as { ARENA_SERVICE?: string }).ARENA_SERVICE
  ?? "http://127.0.0.1:8797";

const app = new ArenaApp(SERVICE);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function render(): void {
  const { session, view, error, lastReplies } = app.state;
  el("error").textContent = error ?? "";
  el("error").style.display = error ? "block" : "none";
  if (!session || !view) return;
  el("formula").textContent = session.formula;
  el("tree").innerHTML = view.treeHtml;
  el("transcript").innerHTML = view.transcriptHtml;
  el("status").innerHTML = view.statusHtml;
  el("meters").innerHTML = view.metersHtml;
  el("notes").innerHTML = view.notesHtml;
  el("replies").textContent =
    lastReplies.length ? `machine: ${lastReplies.join(", ")}` : "";
  renderControls();
}

function renderControls(): void {
  const view = app.state.view;
  const box = el("controls");
  box.innerHTML = "";
  if (!view) return;
  for (const control of view.controls) {
    const row = document.createElement("div");
    row.className = "control";
    const label = document.createElement("span");
    label.textContent = `move at ${control.address}: `;
    row.appendChild(label);
    if (control.kind === "binary") {
      for (const option of control.options) {
        const b = document.createElement("button");
        b.textContent = option;
        b.onclick = () => void submit(control.address, option);
        row.appendChild(b);
      }
    } else {
      const input = document.createElement("input");
      input.type = "text";
      input.inputMode = "numeric";
      input.placeholder = "numeral";
      const b = document.createElement("button");
      b.textContent = "play";
      b.onclick = () => {
        const n = input.value.trim();
        if (/^[0-9]+$/.test(n)) void submit(control.address, Number(n));
      };
      row.appendChild(input);
      row.appendChild(b);
    }
    box.appendChild(row);
  }
}

async function submit(address: string, payload: number | string): Promise<void> {
  await app.submitMove(address, payload);
  render();
}

async function boot(): Promise<void> {
  const select = el<HTMLSelectElement>("corpus");
  for (const entry of await app.corpus()) {
    if (!entry.has_strategy) continue;
    const option = document.createElement("option");
    option.value = entry.id;
    option.textContent = `${entry.id}: ${entry.formula}`;
    option.title = entry.description;
    select.appendChild(option);
  }
  el<HTMLButtonElement>("start").onclick = async () => {
    await app.startSession({ formula_id: select.value });
    render();
  };
  el<HTMLButtonElement>("start-text").onclick = async () => {
    const text = el<HTMLInputElement>("formula-text").value;
    const strategy = el<HTMLInputElement>("strategy-id").value;
    await app.startSession({ formula_text: text, strategy_id: strategy });
    render();
  };
}

void boot();
