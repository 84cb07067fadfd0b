import { PredictionClient } from "./client.js";
import { KeyboardController } from "./controller.js";
import { mountKeyboard } from "./keyboard.js";

// ?api=, ?model= and ?n= override the defaults so one build can point
// at any running prediction service.
const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "http://127.0.0.1:8765";
const modelId = params.get("model") ?? undefined;
const stripSize = Number(params.get("n") ?? "3");

const client = new PredictionClient(apiBase);
const controller = new KeyboardController(client, { n: stripSize, modelId });

const root = document.getElementById("keyboard");
if (root === null) {
  throw new Error("missing #keyboard mount point");
}
mountKeyboard(root, controller);
controller.refresh();

client
  .models()
  .then((models) => {
    const label = document.getElementById("model-label");
    if (label) {
      label.textContent = `models: ${models.map((m) => m.model_id).join(", ")}`;
    }
  })
  .catch(() => {
    /* the banner inside the keyboard reports connectivity problems */
  });
