class Directory {
  close() { return "directory"; }
}
class FileDirectory extends Directory {
  close() { return "file directory"; }
}
class ZipRODirectory extends Directory {
  close() { return "zip directory"; }
}
class ExtFile {
  constructor(path) {
    this.path = path;
    this.mDirectory = null;
  }
  isDirectory() {
    return this.path.endsWith("/");
  }
  getDirectory() {
    this.mDirectory = this.isDirectory() ? new FileDirectory() : new ZipRODirectory();
    return this.mDirectory;
  }
  close() {
    return this.mDirectory.close();
  }
}
const file = new ExtFile("app.apk");
file.getDirectory();
console.log("closed", file.close());
