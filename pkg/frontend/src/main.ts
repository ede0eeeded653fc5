import { ApiClient } from "./api.js";
import { ExplorerApp } from "./app.js";

const root = document.getElementById("app");
if (root !== null) {
  new ExplorerApp(new ApiClient(""), root).mount();
}
